// Small scalar expression language used for anchors, brackets and
// Lagrangians.  Grammar (highest binding last):
//
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          -- right associative
//   primary := number | 'pi' | ident | fn '(' expr ')' | '(' expr ')'
//   fn      := sin | cos | exp | log | sqrt | tanh
//
// Identifiers are [A-Za-z][A-Za-z0-9_]*.  Evaluation is generic over the
// coefficient ring, so the same parsed tree is used for plain doubles and for
// nested jets.

#pragma once

#include "alvc/jet.hpp"

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace alvc {

struct ParseError : std::runtime_error {
    ParseError(std::size_t offset, std::string expected_, const std::string& detail)
        : std::runtime_error("parse error at offset " + std::to_string(offset) + ": " +
                             detail + " (expected " + expected_ + ")"),
          offset(offset),
          expected(std::move(expected_)) {}

    std::size_t offset;   // byte offset into the source string
    std::string expected; // human-readable set of acceptable tokens
};

class Expr {
public:
    enum class Kind { Number, Pi, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
    enum class Fn { Sin, Cos, Exp, Log, Sqrt, Tanh };

    struct Node {
        Kind kind;
        double number = 0.0;                 // Number
        std::string name;                    // Var
        Fn fn = Fn::Sin;                     // Call
        std::shared_ptr<const Node> a, b;    // children (b only for binary ops)
    };

    Expr() = default;
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    bool valid() const { return node_ != nullptr; }
    const Node& root() const {
        if (!node_) throw std::logic_error("Expr: empty expression");
        return *node_;
    }
    std::shared_ptr<const Node> ptr() const { return node_; }

private:
    std::shared_ptr<const Node> node_;
};

// Throws ParseError on malformed input.
Expr parse(const std::string& source);

// Prints with the minimal parenthesization that reparses to the same tree.
std::string print(const Expr& e);

std::set<std::string> free_vars(const Expr& e);

// Structural variable substitution, used when instantiating product systems
// whose factors were authored with overlapping names.
Expr rename_vars(const Expr& e, const std::map<std::string, std::string>& mapping);

struct EvalError : std::runtime_error {
    explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Evaluation.  `proto` supplies the ring shape (jet orders) for literals; for
// R = double pass 0.0.  Unknown identifiers throw EvalError.
// ---------------------------------------------------------------------------

template <class R>
using Env = std::map<std::string, R>;

namespace detail {

template <class R>
R eval_node(const Expr::Node& n, const Env<R>& env, const R& proto) {
    using std::cos;
    using std::exp;
    using std::log;
    using std::pow;
    using std::sin;
    using std::sqrt;
    using std::tanh;
    switch (n.kind) {
    case Expr::Kind::Number:
        return ring_constant_like(proto, n.number);
    case Expr::Kind::Pi:
        return ring_constant_like(proto, 3.14159265358979323846);
    case Expr::Kind::Var: {
        auto it = env.find(n.name);
        if (it == env.end()) throw EvalError("unknown identifier '" + n.name + "'");
        return it->second;
    }
    case Expr::Kind::Neg:
        return -eval_node(*n.a, env, proto);
    case Expr::Kind::Add:
        return eval_node(*n.a, env, proto) + eval_node(*n.b, env, proto);
    case Expr::Kind::Sub:
        return eval_node(*n.a, env, proto) - eval_node(*n.b, env, proto);
    case Expr::Kind::Mul:
        return eval_node(*n.a, env, proto) * eval_node(*n.b, env, proto);
    case Expr::Kind::Div:
        return eval_node(*n.a, env, proto) / eval_node(*n.b, env, proto);
    case Expr::Kind::Pow: {
        R base = eval_node(*n.a, env, proto);
        R expo = eval_node(*n.b, env, proto);
        // Constant integer exponents take the repeated-squaring path, which
        // is defined for any base (including zero and negative values) and is
        // the same routine in every ring.
        if (ring_is_constant(expo)) {
            const double p = leading_value(expo);
            if (p == std::floor(p) && std::abs(p) <= 1024.0)
                return pow_int(base, static_cast<long long>(p));
        }
        return pow(base, expo);
    }
    case Expr::Kind::Call: {
        R arg = eval_node(*n.a, env, proto);
        switch (n.fn) {
        case Expr::Fn::Sin: return sin(arg);
        case Expr::Fn::Cos: return cos(arg);
        case Expr::Fn::Exp: return exp(arg);
        case Expr::Fn::Log: return log(arg);
        case Expr::Fn::Sqrt: return sqrt(arg);
        case Expr::Fn::Tanh: return tanh(arg);
        }
        break;
    }
    }
    throw EvalError("corrupt expression node");
}

} // namespace detail

template <class R>
R eval(const Expr& e, const Env<R>& env, const R& proto) {
    return detail::eval_node(e.root(), env, proto);
}

inline double eval(const Expr& e, const Env<double>& env) {
    return eval<double>(e, env, 0.0);
}

} // namespace alvc
