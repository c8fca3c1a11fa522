#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "alvc/algebroid.hpp"
#include "alvc/csv.hpp"
#include "alvc/jet.hpp"
#include "alvc/problem.hpp"
#include "alvc/util.hpp"

#include "support/structures.hpp"

#include <cmath>

using namespace alvc;
using testfix::action_structure;
using testfix::halton_samples;
using testfix::zero_c;

namespace {

AlgebroidStructure rank2_incompatible() {
    // anchor embeds a rank-2 fiber into a 1-dimensional base; the constant
    // bracket cannot be matched by anchor derivatives, residual is exactly 1
    std::vector<std::vector<Expr>> rho = {{parse("1"), parse("0")}};
    auto c = zero_c(2);
    c[0][0][1] = parse("1");
    c[0][1][0] = parse("-1");
    return make_algebroid(1, 2, std::move(rho), std::move(c), "broken-compat");
}

} // namespace

TEST_CASE("construction validates shapes and variable usage") {
    CHECK_THROWS_AS(make_algebroid(1, 2, {{parse("1")}}, zero_c(2)), std::invalid_argument);
    CHECK_THROWS_AS(make_algebroid(1, 1, {{parse("x2")}}, zero_c(1)), std::invalid_argument);
    CHECK_NOTHROW(make_algebroid(1, 1, {{parse("x1^2")}}, zero_c(1)));
    CHECK_THROWS_AS(make_algebroid(0, 2, {}, zero_c(3)), std::invalid_argument);
}

TEST_CASE("bracket table is antisymmetrized at load when needed") {
    auto c = zero_c(2);
    c[0][0][1] = parse("1"); // partner left at zero on purpose
    const auto A = make_algebroid(0, 2, {}, std::move(c), "half-filled");
    CHECK(A.skew_adjusted);
    const auto cv = c_eval<double>(A, {}, 0.0);
    CHECK(cv[0][0][1] == 0.5);
    CHECK(cv[0][1][0] == -0.5);

    // an already-skew table is passed through unchanged
    const auto so3 = preset_lie_so3();
    CHECK_FALSE(so3.skew_adjusted);
    const auto sv = c_eval<double>(so3, {}, 0.0);
    CHECK(sv[2][0][1] == 1.0);
    CHECK(sv[2][1][0] == -1.0);
}

TEST_CASE("axiom check: clean structures pass, the rank-2 probe fails at 1") {
    const double tol = 1e-9;

    const auto tangent = preset_tangent(2);
    const auto rt = check_axioms(tangent, halton_samples(2, 64), tol);
    CHECK(rt.pass);
    CHECK(rt.max_skew == 0.0);
    CHECK(rt.max_compat == 0.0);

    const auto so3 = preset_lie_so3();
    const auto rs = check_axioms(so3, halton_samples(0, 64), tol);
    CHECK(rs.pass);

    const auto act = action_structure();
    const auto ra = check_axioms(act, halton_samples(2, 64), tol);
    CHECK(ra.pass);
    CHECK(ra.max_compat <= 1e-12);

    const auto bad = rank2_incompatible();
    const auto rb = check_axioms(bad, halton_samples(1, 64), tol);
    CHECK_FALSE(rb.pass);
    CHECK(rb.max_skew == 0.0);
    CHECK(rb.max_compat == 1.0); // exactly: |0 - c| with constant c = 1
    CHECK_FALSE(rb.skew_adjusted);
}

TEST_CASE("section brackets reproduce structure constants and anchor derivatives") {
    const auto so3 = preset_lie_so3();
    const auto b = bracket_sections(so3, {parse("1"), parse("0"), parse("0")},
                                    {parse("0"), parse("1"), parse("0")}, {});
    CHECK(b[0] == 0.0);
    CHECK(b[1] == 0.0);
    CHECK(b[2] == 1.0);

    // [X, X] = 0
    const auto z = bracket_sections(so3, {parse("1"), parse("2"), parse("3")},
                                    {parse("1"), parse("2"), parse("3")}, {});
    for (double v : z) CHECK(v == 0.0);

    // tangent line: [1, x] = 1 at every base point
    const auto tangent = preset_tangent(1);
    const auto bt = bracket_sections(tangent, {parse("1")}, {parse("x1")}, {0.7});
    CHECK(bt[0] == doctest::Approx(1.0).epsilon(1e-14));

    // antisymmetry on a structure with base-dependent coefficients
    const auto act = action_structure();
    std::vector<Expr> X = {parse("x1"), parse("1"), parse("x2")};
    std::vector<Expr> Y = {parse("2"), parse("x2"), parse("x1*x2")};
    const auto xy = bracket_sections(act, X, Y, {0.3, -0.4});
    const auto yx = bracket_sections(act, Y, X, {0.3, -0.4});
    for (std::size_t i = 0; i < xy.size(); ++i)
        CHECK(xy[i] == doctest::Approx(-yx[i]).epsilon(1e-13));
}

TEST_CASE("flip relation: frozen rotation example, involution, relation guard") {
    const auto so3 = preset_lie_so3();

    TEVector X;
    X.y = {1.0, 0.0, 0.0};
    X.ydot = {0.0, 0.0, 0.0};
    const TEVector Y = kappa_apply(so3, X, {0.0, 1.0, 0.0});
    CHECK(Y.y == std::vector<double>{0.0, 1.0, 0.0});
    REQUIRE(Y.ydot.size() == 3);
    CHECK(Y.ydot[0] == 0.0);
    CHECK(Y.ydot[1] == 0.0);
    CHECK(Y.ydot[2] == -1.0);

    // applying the flip twice over the original fiber point restores the input
    TEVector W;
    W.y = {0.4, -0.2, 0.9};
    W.ydot = {0.1, 0.7, -0.3};
    const TEVector flip = kappa_apply(so3, W, {0.5, 0.25, -0.8});
    const TEVector back = kappa_apply(so3, flip, W.y);
    for (int i = 0; i < 3; ++i) {
        CHECK(back.y[static_cast<std::size_t>(i)] == W.y[static_cast<std::size_t>(i)]);
        CHECK(back.ydot[static_cast<std::size_t>(i)] ==
              doctest::Approx(W.ydot[static_cast<std::size_t>(i)]).epsilon(1e-14));
    }

    // second-order points are fixed by the flip
    const TEVector fixed = kappa_apply(so3, W, W.y);
    for (int i = 0; i < 3; ++i)
        CHECK(fixed.ydot[static_cast<std::size_t>(i)] ==
              W.ydot[static_cast<std::size_t>(i)]);

    // base velocities must match the anchor image of the target fiber
    const auto tangent = preset_tangent(1);
    TEVector T;
    T.x = {0.2};
    T.y = {0.5};
    T.xdot = {0.9};
    T.ydot = {0.0};
    CHECK_NOTHROW(kappa_apply(tangent, T, {0.9}));
    try {
        kappa_apply(tangent, T, {0.5});
        FAIL("expected NotInRelationError");
    } catch (const NotInRelationError& e) {
        CHECK(e.residual == doctest::Approx(0.4).epsilon(1e-14));
    }
}

TEST_CASE("dual map: frozen rotation example and duality with the flip") {
    const auto so3 = preset_lie_so3();
    TStarEVector w;
    w.y = {1.0, 0.0, 0.0};
    w.piv = {0.0, 1.0, 0.0};
    const TStarEImage img = epsilon_apply(so3, w);
    CHECK(img.xi == w.piv); // the dual map passes the fiber covector through
    REQUIRE(img.xidot.size() == 3);
    CHECK(img.xidot[0] == 0.0);
    CHECK(img.xidot[1] == 0.0);
    CHECK(img.xidot[2] == -1.0);

    // <eps(w), X> = <w, kappa(X)> for X in the relation over w.y:
    // fiber pairing xidot.y + piv.ydot on the left, p.(rho y) + piv.(flip ydot)
    // on the right.
    Rng rng(11);
    for (int inst = 0; inst < 40; ++inst) {
        const int m = 1 + static_cast<int>(rng.index(2));
        const int r = 1 + static_cast<int>(rng.index(3));
        std::vector<std::vector<Expr>> rho(static_cast<std::size_t>(m),
                                           std::vector<Expr>(static_cast<std::size_t>(r)));
        for (int a = 0; a < m; ++a)
            for (int i = 0; i < r; ++i)
                rho[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] = parse(
                    "(" + format_g17(rng.uniform(-1.0, 1.0)) + ")+(" +
                    format_g17(rng.uniform(-1.0, 1.0)) + ")*x1");
        auto c = zero_c(r);
        for (int k = 0; k < r; ++k)
            for (int i = 0; i < r; ++i)
                for (int j = i + 1; j < r; ++j) {
                    const std::string s = format_g17(rng.uniform(-1.0, 1.0));
                    c[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]
                     [static_cast<std::size_t>(j)] = parse(s);
                    c[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]
                     [static_cast<std::size_t>(i)] = parse("-(" + s + ")");
                }
        const auto A = make_algebroid(m, r, std::move(rho), std::move(c));

        TStarEVector wv;
        wv.x = rng.vector(static_cast<std::size_t>(m), -1.0, 1.0);
        wv.y = rng.vector(static_cast<std::size_t>(r), -1.0, 1.0);
        wv.p = rng.vector(static_cast<std::size_t>(m), -1.0, 1.0);
        wv.piv = rng.vector(static_cast<std::size_t>(r), -1.0, 1.0);
        const TStarEImage ev = epsilon_apply(A, wv);

        TEVector X;
        X.x = wv.x;
        X.y = rng.vector(static_cast<std::size_t>(r), -1.0, 1.0);
        X.xdot = anchor_apply<double>(A, wv.x, wv.y, 0.0);
        X.ydot = rng.vector(static_cast<std::size_t>(r), -1.0, 1.0);
        const TEVector Y = kappa_apply(A, X, wv.y);

        double lhs = 0.0, rhs = 0.0;
        for (int i = 0; i < r; ++i) {
            lhs += ev.xidot[static_cast<std::size_t>(i)] * X.y[static_cast<std::size_t>(i)] +
                   wv.piv[static_cast<std::size_t>(i)] * X.ydot[static_cast<std::size_t>(i)];
            rhs += wv.piv[static_cast<std::size_t>(i)] * Y.ydot[static_cast<std::size_t>(i)];
        }
        const auto rhoy = anchor_apply<double>(A, wv.x, X.y, 0.0);
        for (int a = 0; a < m; ++a)
            rhs += wv.p[static_cast<std::size_t>(a)] * rhoy[static_cast<std::size_t>(a)];
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("ring-generic dual map at order zero matches the scalar one bitwise") {
    const auto act = action_structure();
    Rng rng(13);
    for (int inst = 0; inst < 20; ++inst) {
        TStarEVector w;
        w.x = rng.vector(2, -1.0, 1.0);
        w.y = rng.vector(3, -1.0, 1.0);
        w.p = rng.vector(2, -1.0, 1.0);
        w.piv = rng.vector(3, -1.0, 1.0);
        const TStarEImage direct = epsilon_apply(act, w);

        using J = Jet<double>;
        auto lift = [](const std::vector<double>& v) {
            std::vector<J> out;
            for (double s : v) out.push_back(J::constant(0, s));
            return out;
        };
        const auto ev = epsilon_generic<J>(act, lift(w.x), lift(w.y), lift(w.p), lift(w.piv),
                                           J::constant(0, 0.0));
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(ev.xi[i].c[0] == direct.xi[i]);
            CHECK(ev.xidot[i].c[0] == direct.xidot[i]);
        }
        for (std::size_t a = 0; a < 2; ++a) CHECK(ev.xdot[a].c[0] == direct.xdot[a]);
    }
}

TEST_CASE("product structure concatenates factors and renames base variables") {
    const auto prod = preset_product({preset_tangent(1), preset_lie_so3()});
    CHECK(prod.m == 1);
    CHECK(prod.r == 4);
    const auto rv = rho_eval<double>(prod, {0.3}, 0.0);
    CHECK(rv[0][0] == 1.0);
    for (int i = 1; i < 4; ++i) CHECK(rv[0][static_cast<std::size_t>(i)] == 0.0);
    const auto cv = c_eval<double>(prod, {0.3}, 0.0);
    CHECK(cv[3][1][2] == 1.0);  // rotation block shifted by the tangent factor
    CHECK(cv[3][2][1] == -1.0);
    CHECK(cv[0][1][2] == 0.0);  // no cross-factor coupling
    const auto rep = check_axioms(prod, halton_samples(1, 32), 1e-9);
    CHECK(rep.pass);
}
