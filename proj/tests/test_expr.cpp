#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "alvc/expr.hpp"
#include "alvc/util.hpp"

#include <cmath>

using namespace alvc;

using J = Jet<double>;

TEST_CASE("print emits minimal parentheses and reparses to the same tree") {
    const char* cases[] = {
        "x*y+z^2",   "(x+y)*z",       "x-(y-z)",  "x^y^z",    "(x^y)^z",
        "-x^2",      "1/(2*x)",       "sin(x)*2", "-(x+y)",   "x/(y/z)",
        "x/y/z",     "tanh(x1_0)+pi", "2^-x",     "-(x*y)^2",
    };
    for (const char* src : cases) {
        CAPTURE(src);
        const Expr e = parse(src);
        const std::string printed = print(e);
        const Expr r = parse(printed);
        CHECK(print(r) == printed);
        // both trees must evaluate identically
        Env<double> env{{"x", 1.3}, {"y", 0.7}, {"z", 2.1}, {"x1_0", 0.4}};
        CHECK(eval(e, env) == eval(r, env));
    }
    CHECK(print(parse("x + y * z")) == "x + y*z");
    CHECK(print(parse("(x + y) * z")) == "(x + y)*z");
}

TEST_CASE("parse errors carry byte offsets and expectations") {
    try {
        parse("x+*y");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset == 2);
        CHECK(!e.expected.empty());
    }
    try {
        parse("foo(x)");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset == 0); // points at the unknown function name
        CHECK(e.expected.find("sin") != std::string::npos);
    }
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("(x"), ParseError);
    CHECK_THROWS_AS(parse("1..2"), ParseError);
    CHECK_THROWS_AS(parse("x y"), ParseError);
}

TEST_CASE("evaluation over jets tracks derivatives through the tree") {
    // L = y^2/2 with y carrying derivatives (12, 24, 24).
    const Expr e = parse("y1_1^2/2");
    Env<J> env{{"y1_1", J(std::vector<double>{12, 24, 24})}};
    const J out = eval(e, env, J::constant(2, 0.0));
    CHECK(out.c[0] == 72.0);
    CHECK(out.c[1] == 288.0);
    CHECK(out.c[2] == 864.0);

    // product of a variable jet and a constant
    Env<J> env2{{"x", J::variable(1, 2.0)}, {"y", J::constant(1, 3.0)}};
    const J p = eval(parse("x*y"), env2, J::constant(1, 0.0));
    CHECK(p.c[0] == 6.0);
    CHECK(p.c[1] == 3.0);
}

TEST_CASE("scalar evaluation and order-0 jet evaluation agree bitwise") {
    Rng rng(7);
    const char* exprs[] = {
        "sin(x)*y^3/(1+exp(x))",
        "sqrt(x+2)*tanh(y)-pi*x",
        "log(2+x^2)/(y+3)",
        "x^2*y-2*x/y+0.5",
        "cos(x*y)+x^-2",
    };
    for (const char* src : exprs) {
        const Expr e = parse(src);
        for (int inst = 0; inst < 25; ++inst) {
            const double x = rng.uniform(0.2, 1.5);
            const double y = rng.uniform(0.3, 1.5);
            const double s = eval(e, Env<double>{{"x", x}, {"y", y}});
            const J j = eval(e, Env<J>{{"x", J::constant(0, x)}, {"y", J::constant(0, y)}},
                             J::constant(0, 0.0));
            CHECK(j.c[0] == s); // bit-for-bit
        }
    }
}

TEST_CASE("integer powers evaluate for any base sign") {
    CHECK(eval(parse("(-2)^3"), Env<double>{}) == -8.0);
    CHECK(eval(parse("x^2"), Env<double>{{"x", -3.0}}) == 9.0);
    CHECK(eval(parse("x^0"), Env<double>{{"x", 0.0}}) == 1.0);
    // fractional powers of negative values: IEEE NaN for scalars, a domain
    // error once derivatives are requested
    CHECK(std::isnan(eval(parse("x^0.5"), Env<double>{{"x", -1.0}})));
    Env<J> jenv{{"x", J::variable(2, -1.0)}};
    CHECK_THROWS_AS(eval(parse("x^0.5"), jenv, J::constant(2, 0.0)), std::domain_error);
}

TEST_CASE("free variables and renaming") {
    const Expr e = parse("x1*y2_0+pi*sin(z)");
    const auto fv = free_vars(e);
    CHECK(fv == std::set<std::string>{"x1", "y2_0", "z"});

    const Expr r = rename_vars(e, {{"x1", "x3"}, {"z", "w"}});
    CHECK(free_vars(r) == std::set<std::string>{"x3", "y2_0", "w"});
    Env<double> env{{"x3", 2.0}, {"y2_0", 3.0}, {"w", 0.5}};
    Env<double> envo{{"x1", 2.0}, {"y2_0", 3.0}, {"z", 0.5}};
    CHECK(eval(r, env) == eval(e, envo));
}

TEST_CASE("unknown identifiers are reported at evaluation time") {
    const Expr e = parse("a+b");
    CHECK_THROWS_AS(eval(e, Env<double>{{"a", 1.0}}), EvalError);
}

TEST_CASE("power is right associative; unary minus binds below it") {
    CHECK(eval(parse("2^3^2"), Env<double>{}) == 512.0);  // 2^(3^2)
    CHECK(eval(parse("(2^3)^2"), Env<double>{}) == 64.0);
    CHECK(eval(parse("-2^2"), Env<double>{}) == -4.0);    // -(2^2)
    CHECK(eval(parse("(-2)^2"), Env<double>{}) == 4.0);
}
