#include "alvc/algebroid.hpp"

#include "alvc/util.hpp"

#include <algorithm>
#include <cmath>

namespace alvc {

namespace {

// (lhs - rhs suitably halved) as an expression tree, so skewness of the
// stored bracket is an exact structural fact rather than a sampled one.
Expr antisymmetrized(const Expr& cij, const Expr& cji) {
    using Node = Expr::Node;
    auto sub = std::make_shared<Node>();
    sub->kind = Expr::Kind::Sub;
    sub->a = cij.ptr();
    sub->b = cji.ptr();
    auto half = std::make_shared<Node>();
    half->kind = Expr::Kind::Number;
    half->number = 0.5;
    auto mul = std::make_shared<Node>();
    mul->kind = Expr::Kind::Mul;
    mul->a = half;
    mul->b = sub;
    return Expr(mul);
}

void require_only_base_vars(const AlgebroidStructure& A, const Expr& e, const char* what) {
    for (const auto& v : free_vars(e)) {
        bool ok = false;
        for (int a = 0; a < A.m; ++a)
            if (v == A.base_name(a)) ok = true;
        if (!ok)
            throw std::invalid_argument(std::string(what) + ": expression uses '" + v +
                                        "', not a base coordinate of the structure");
    }
}

} // namespace

AlgebroidStructure make_algebroid(int m, int r, std::vector<std::vector<Expr>> rho,
                                  std::vector<std::vector<std::vector<Expr>>> c,
                                  std::string label) {
    if (m < 0 || r <= 0) throw std::invalid_argument("algebroid: need m >= 0, r >= 1");
    if (static_cast<int>(rho.size()) != m)
        throw std::invalid_argument("algebroid: rho must have m rows");
    for (const auto& row : rho)
        if (static_cast<int>(row.size()) != r)
            throw std::invalid_argument("algebroid: rho rows must have r entries");
    if (static_cast<int>(c.size()) != r)
        throw std::invalid_argument("algebroid: c must have r slabs");
    for (const auto& slab : c) {
        if (static_cast<int>(slab.size()) != r)
            throw std::invalid_argument("algebroid: c slabs must be r x r");
        for (const auto& row : slab)
            if (static_cast<int>(row.size()) != r)
                throw std::invalid_argument("algebroid: c slabs must be r x r");
    }

    AlgebroidStructure A;
    A.m = m;
    A.r = r;
    A.rho = std::move(rho);
    A.c_raw = c;
    A.label = std::move(label);

    for (const auto& row : A.rho)
        for (const auto& e : row) require_only_base_vars(A, e, "anchor");
    for (const auto& slab : c)
        for (const auto& row : slab)
            for (const auto& e : row) require_only_base_vars(A, e, "bracket");

    // Detect non-skew input at a handful of quasi-random points, then store
    // the exactly-skew combination regardless.
    const int probes = 8;
    double worst = 0.0;
    for (int s = 0; s < probes; ++s) {
        std::vector<double> x = halton_point(static_cast<std::uint64_t>(s),
                                             static_cast<std::size_t>(std::max(m, 1)), -1.0, 1.0);
        x.resize(static_cast<std::size_t>(m));
        const Env<double> env = base_env(A, x);
        for (int k = 0; k < r; ++k)
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j) {
                    const double v = eval(c[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]
                                           [static_cast<std::size_t>(j)],
                                          env) +
                                     eval(c[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]
                                           [static_cast<std::size_t>(i)],
                                          env);
                    worst = std::max(worst, std::abs(v));
                }
    }
    A.skew_adjusted = worst > 1e-12;

    A.c.resize(static_cast<std::size_t>(r));
    for (int k = 0; k < r; ++k) {
        A.c[static_cast<std::size_t>(k)].resize(static_cast<std::size_t>(r));
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j)
                A.c[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)].push_back(
                    antisymmetrized(c[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]
                                     [static_cast<std::size_t>(j)],
                                    c[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]
                                     [static_cast<std::size_t>(i)]));
    }
    return A;
}

AxiomReport check_axioms(const AlgebroidStructure& A,
                         const std::vector<std::vector<double>>& samples, double tol) {
    AxiomReport rep;
    rep.tol = tol;
    rep.samples = samples.size();
    rep.skew_adjusted = A.skew_adjusted;

    for (const auto& x : samples) {
        if (static_cast<int>(x.size()) != A.m)
            throw std::invalid_argument("check_axioms: sample dimension mismatch");

        // Skew-symmetry of the loaded (raw) bracket table.
        const Env<double> env = base_env(A, x);
        for (int k = 0; k < A.r; ++k)
            for (int i = 0; i < A.r; ++i)
                for (int j = 0; j < A.r; ++j) {
                    const double v =
                        eval(A.c_raw[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]
                                    [static_cast<std::size_t>(j)],
                             env) +
                        eval(A.c_raw[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]
                                    [static_cast<std::size_t>(i)],
                             env);
                    rep.max_skew = std::max(rep.max_skew, std::abs(v));
                }

        // Anchor-bracket compatibility:
        //   sum_b [ d_b rho[a][k] rho[b][j] - d_b rho[a][j] rho[b][k] ]
        //     = sum_i rho[a][i] c[i][j][k]
        // The derivative matrix is obtained one base direction at a time via
        // order-1 seeds.
        const auto rho_val = rho_eval<double>(A, x, 0.0);
        const auto c_val = c_eval<double>(A, x, 0.0);
        // drho[b][a][i] = d rho[a][i] / d x_b
        std::vector<std::vector<std::vector<double>>> drho(static_cast<std::size_t>(A.m));
        for (int b = 0; b < A.m; ++b) {
            std::vector<Jet<double>> xj;
            xj.reserve(static_cast<std::size_t>(A.m));
            for (int a = 0; a < A.m; ++a)
                xj.push_back(Jet<double>(std::vector<double>{
                    x[static_cast<std::size_t>(a)], a == b ? 1.0 : 0.0}));
            const auto rj = rho_eval<Jet<double>>(A, xj, Jet<double>::constant(1, 0.0));
            auto& slab = drho[static_cast<std::size_t>(b)];
            slab.resize(static_cast<std::size_t>(A.m));
            for (int a = 0; a < A.m; ++a)
                for (int i = 0; i < A.r; ++i)
                    slab[static_cast<std::size_t>(a)].push_back(
                        rj[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)].c[1]);
        }
        for (int a = 0; a < A.m; ++a)
            for (int j = 0; j < A.r; ++j)
                for (int k = 0; k < A.r; ++k) {
                    double lhs = 0.0;
                    for (int b = 0; b < A.m; ++b)
                        lhs += drho[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)]
                                   [static_cast<std::size_t>(k)] *
                                   rho_val[static_cast<std::size_t>(b)][static_cast<std::size_t>(j)] -
                               drho[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)]
                                   [static_cast<std::size_t>(j)] *
                                   rho_val[static_cast<std::size_t>(b)][static_cast<std::size_t>(k)];
                    double rhs = 0.0;
                    for (int i = 0; i < A.r; ++i)
                        rhs += rho_val[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] *
                               c_val[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                                    [static_cast<std::size_t>(k)];
                    rep.max_compat = std::max(rep.max_compat, std::abs(lhs - rhs));
                }
    }
    rep.pass = rep.max_skew <= tol && rep.max_compat <= tol;
    return rep;
}

std::vector<double> bracket_sections(const AlgebroidStructure& A, const std::vector<Expr>& X,
                                     const std::vector<Expr>& Y, const std::vector<double>& x) {
    if (static_cast<int>(X.size()) != A.r || static_cast<int>(Y.size()) != A.r)
        throw std::invalid_argument("bracket_sections: section size must equal the rank");
    const Env<double> env = base_env(A, x);
    std::vector<double> Xv(static_cast<std::size_t>(A.r)), Yv(static_cast<std::size_t>(A.r));
    for (int i = 0; i < A.r; ++i) {
        Xv[static_cast<std::size_t>(i)] = eval(X[static_cast<std::size_t>(i)], env);
        Yv[static_cast<std::size_t>(i)] = eval(Y[static_cast<std::size_t>(i)], env);
    }
    const auto rho_val = rho_eval<double>(A, x, 0.0);
    const auto c_val = c_eval<double>(A, x, 0.0);

    // dX[a][k] = d X^k / d x_a, likewise dY.
    std::vector<std::vector<double>> dX(static_cast<std::size_t>(A.m)),
        dY(static_cast<std::size_t>(A.m));
    for (int a = 0; a < A.m; ++a) {
        Env<Jet<double>> jenv;
        for (int b = 0; b < A.m; ++b)
            jenv.emplace(A.base_name(b), Jet<double>(std::vector<double>{
                                             x[static_cast<std::size_t>(b)], a == b ? 1.0 : 0.0}));
        const Jet<double> proto = Jet<double>::constant(1, 0.0);
        for (int k = 0; k < A.r; ++k) {
            dX[static_cast<std::size_t>(a)].push_back(
                eval(X[static_cast<std::size_t>(k)], jenv, proto).c[1]);
            dY[static_cast<std::size_t>(a)].push_back(
                eval(Y[static_cast<std::size_t>(k)], jenv, proto).c[1]);
        }
    }

    std::vector<double> out(static_cast<std::size_t>(A.r), 0.0);
    for (int k = 0; k < A.r; ++k) {
        double acc = 0.0;
        for (int i = 0; i < A.r; ++i)
            for (int j = 0; j < A.r; ++j)
                acc += c_val[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]
                            [static_cast<std::size_t>(j)] *
                       Xv[static_cast<std::size_t>(i)] * Yv[static_cast<std::size_t>(j)];
        for (int a = 0; a < A.m; ++a)
            for (int i = 0; i < A.r; ++i)
                acc += rho_val[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] *
                       (Xv[static_cast<std::size_t>(i)] *
                            dY[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)] -
                        Yv[static_cast<std::size_t>(i)] *
                            dX[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)]);
        out[static_cast<std::size_t>(k)] = acc;
    }
    return out;
}

TEVector kappa_apply(const AlgebroidStructure& A, const TEVector& X,
                     const std::vector<double>& ytarget, double tol) {
    if (static_cast<int>(ytarget.size()) != A.r)
        throw std::invalid_argument("kappa_apply: ytarget size must equal the rank");
    const auto need = anchor_apply<double>(A, X.x, ytarget, 0.0);
    double resid = 0.0;
    for (int a = 0; a < A.m; ++a)
        resid = std::max(resid,
                         std::abs(X.xdot[static_cast<std::size_t>(a)] - need[static_cast<std::size_t>(a)]));
    if (resid > tol)
        throw NotInRelationError("kappa_apply: X.xdot != rho(x)·ytarget, no related vector "
                                 "(residual " +
                                     std::to_string(resid) + ")",
                                 resid);

    TEVector Y;
    Y.x = X.x;
    Y.y = ytarget;
    Y.xdot = anchor_apply<double>(A, X.x, X.y, 0.0);
    const auto c_val = c_eval<double>(A, X.x, 0.0);
    Y.ydot.assign(static_cast<std::size_t>(A.r), 0.0);
    for (int k = 0; k < A.r; ++k) {
        double acc = X.ydot[static_cast<std::size_t>(k)];
        for (int i = 0; i < A.r; ++i)
            for (int j = 0; j < A.r; ++j)
                acc += c_val[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]
                            [static_cast<std::size_t>(j)] *
                       ytarget[static_cast<std::size_t>(i)] * X.y[static_cast<std::size_t>(j)];
        Y.ydot[static_cast<std::size_t>(k)] = acc;
    }
    return Y;
}

TStarEImage epsilon_apply(const AlgebroidStructure& A, const TStarEVector& w) {
    const auto v = epsilon_generic<double>(A, w.x, w.y, w.p, w.piv, 0.0);
    return TStarEImage{v.x, v.xi, v.xdot, v.xidot};
}

} // namespace alvc
