// Anchored vector-bundle structures (anchor matrix rho and bracket
// coefficients c) with numeric axiom checking, plus the order-1 canonical
// maps between TE and T*E that the higher-order machinery builds on.
//
// Index layout: rho[a][i] is the coefficient of fiber direction i in base
// direction a; c[k][i][j] is the k-th component of the bracket of the i-th
// and j-th frame sections.  All entries are expressions in x1..xm.

#pragma once

#include "alvc/expr.hpp"
#include "alvc/jet.hpp"

#include <string>
#include <vector>

namespace alvc {

struct AlgebroidStructure {
    int m = 0; // base dimension
    int r = 0; // fiber rank
    std::vector<std::vector<Expr>> rho;            // rho[a][i], m x r
    std::vector<std::vector<std::vector<Expr>>> c; // c[k][i][j], r x r x r (skew in i,j)
    std::vector<std::vector<std::vector<Expr>>> c_raw; // as loaded, before antisymmetrization
    std::string label;
    bool skew_adjusted = false; // true if the loaded c was not already skew

    std::string base_name(int a) const { return "x" + std::to_string(a + 1); }
};

// Builds the canonical structure from raw expression tables: validates
// shapes, antisymmetrizes c (recording whether that changed anything), and
// checks that only x1..xm appear free.
AlgebroidStructure make_algebroid(int m, int r, std::vector<std::vector<Expr>> rho,
                                  std::vector<std::vector<std::vector<Expr>>> c,
                                  std::string label = {});

struct TEVector {
    std::vector<double> x, y, xdot, ydot;
};

struct TStarEVector {
    std::vector<double> x, y, p, piv;
};

struct AxiomReport {
    double max_skew = 0.0;   // worst |c[k][i][j] + c[k][j][i]| over samples (raw input)
    double max_compat = 0.0; // worst anchor-bracket compatibility residual
    std::size_t samples = 0;
    double tol = 0.0;
    bool pass = false;
    bool skew_adjusted = false;
};

AxiomReport check_axioms(const AlgebroidStructure& A,
                         const std::vector<std::vector<double>>& samples, double tol);

// [X,Y]^k(x) for sections given as expressions in the base coordinates.
std::vector<double> bracket_sections(const AlgebroidStructure& A,
                                     const std::vector<Expr>& X, const std::vector<Expr>& Y,
                                     const std::vector<double>& x);

struct NotInRelationError : std::runtime_error {
    NotInRelationError(const std::string& what, double residual_)
        : std::runtime_error(what), residual(residual_) {}
    double residual;
};

// The canonical flip relation on TE: returns the unique Y over ytarget with
// kappa(X) ∋ Y.  Requires X.xdot = rho(X.x)·ytarget up to tol.
TEVector kappa_apply(const AlgebroidStructure& A, const TEVector& X,
                     const std::vector<double>& ytarget, double tol = 1e-9);

struct TStarEImage {
    std::vector<double> x, xi, xdot, xidot;
};

TStarEImage epsilon_apply(const AlgebroidStructure& A, const TStarEVector& w);

// ---------------------------------------------------------------------------
// Ring-generic evaluation helpers.  The higher-order pipeline applies the
// order-1 maps to jet-valued coordinates, so these are templates.
// ---------------------------------------------------------------------------

template <class R>
Env<R> base_env(const AlgebroidStructure& A, const std::vector<R>& x) {
    Env<R> env;
    for (int a = 0; a < A.m; ++a) env.emplace(A.base_name(a), x[static_cast<std::size_t>(a)]);
    return env;
}

template <class R>
std::vector<std::vector<R>> rho_eval(const AlgebroidStructure& A, const std::vector<R>& x,
                                     const R& proto) {
    const Env<R> env = base_env(A, x);
    std::vector<std::vector<R>> out(static_cast<std::size_t>(A.m));
    for (int a = 0; a < A.m; ++a) {
        out[static_cast<std::size_t>(a)].reserve(static_cast<std::size_t>(A.r));
        for (int i = 0; i < A.r; ++i)
            out[static_cast<std::size_t>(a)].push_back(
                eval(A.rho[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)], env, proto));
    }
    return out;
}

template <class R>
std::vector<std::vector<std::vector<R>>> c_eval(const AlgebroidStructure& A,
                                                const std::vector<R>& x, const R& proto) {
    const Env<R> env = base_env(A, x);
    std::vector<std::vector<std::vector<R>>> out(static_cast<std::size_t>(A.r));
    for (int k = 0; k < A.r; ++k) {
        auto& slab = out[static_cast<std::size_t>(k)];
        slab.resize(static_cast<std::size_t>(A.r));
        for (int i = 0; i < A.r; ++i)
            for (int j = 0; j < A.r; ++j)
                slab[static_cast<std::size_t>(i)].push_back(eval(
                    A.c[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]
                       [static_cast<std::size_t>(j)],
                    env, proto));
    }
    return out;
}

// rho(x) * y, the admissibility right-hand side.
template <class R>
std::vector<R> anchor_apply(const AlgebroidStructure& A, const std::vector<R>& x,
                            const std::vector<R>& y, const R& proto) {
    auto rho = rho_eval(A, x, proto);
    std::vector<R> out;
    out.reserve(static_cast<std::size_t>(A.m));
    for (int a = 0; a < A.m; ++a) {
        R acc = ring_constant_like(proto, 0.0);
        for (int i = 0; i < A.r; ++i)
            acc = acc + rho[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] *
                            y[static_cast<std::size_t>(i)];
        out.push_back(acc);
    }
    return out;
}

// The dual canonical map on covector coordinates, generically over the ring:
//   xi_i    = piv_i
//   xdot_a  = sum_i rho[a][i] y_i
//   xidot_j = sum_{k,i} c[k][i][j] y_i piv_k + sum_a rho[a][j] p_a
template <class R>
struct EpsilonValue {
    std::vector<R> x, xi, xdot, xidot;
};

template <class R>
EpsilonValue<R> epsilon_generic(const AlgebroidStructure& A, const std::vector<R>& x,
                                const std::vector<R>& y, const std::vector<R>& p,
                                const std::vector<R>& piv, const R& proto) {
    EpsilonValue<R> out;
    out.x = x;
    out.xi = piv;
    out.xdot = anchor_apply(A, x, y, proto);
    auto rho = rho_eval(A, x, proto);
    auto c = c_eval(A, x, proto);
    out.xidot.reserve(static_cast<std::size_t>(A.r));
    for (int j = 0; j < A.r; ++j) {
        R acc = ring_constant_like(proto, 0.0);
        for (int k = 0; k < A.r; ++k)
            for (int i = 0; i < A.r; ++i)
                acc = acc + c[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]
                             [static_cast<std::size_t>(j)] *
                                y[static_cast<std::size_t>(i)] * piv[static_cast<std::size_t>(k)];
        for (int a = 0; a < A.m; ++a)
            acc = acc + rho[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)] *
                            p[static_cast<std::size_t>(a)];
        out.xidot.push_back(acc);
    }
    return out;
}

} // namespace alvc
