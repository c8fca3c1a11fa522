#include "alvc/solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace alvc {

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr mk_number(double v) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Kind::Number;
    n->number = v;
    return n;
}

NodePtr mk_var(const std::string& name) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Kind::Var;
    n->name = name;
    return n;
}

NodePtr mk_bin(Expr::Kind kind, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = kind;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

std::string coef_name(int i, int j) {
    return "c" + std::to_string(i + 1) + "_" + std::to_string(j);
}

// y_i(t) = sum_j coef_ij * (t - t0)^j with coef_ij either a Var node (solver
// internals) or a Number node (returned paths).
Expr ansatz_expr(double t0, int degree, const std::function<NodePtr(int)>& coef) {
    const NodePtr tau = mk_bin(Expr::Kind::Sub, mk_var("t"), mk_number(t0));
    NodePtr acc;
    for (int j = 0; j <= degree; ++j) {
        NodePtr term = coef(j);
        if (j == 1) term = mk_bin(Expr::Kind::Mul, term, tau);
        if (j >= 2)
            term = mk_bin(Expr::Kind::Mul, term,
                          mk_bin(Expr::Kind::Pow, tau, mk_number(static_cast<double>(j))));
        acc = acc ? mk_bin(Expr::Kind::Add, acc, term) : term;
    }
    return Expr(acc);
}

AdmissiblePath ansatz_path_vars(const CollocationProblem& p) {
    AdmissiblePath ap;
    ap.x0 = p.x0;
    ap.t0 = p.t0;
    ap.t1 = p.t1;
    ap.steps = p.flow_steps;
    ap.y.reserve(static_cast<std::size_t>(p.A.r));
    for (int i = 0; i < p.A.r; ++i)
        ap.y.push_back(ansatz_expr(p.t0, p.degree, [&](int j) { return mk_var(coef_name(i, j)); }));
    return ap;
}

int default_nodes(const CollocationProblem& p) {
    return p.nodes > 0 ? p.nodes : 2 * (p.degree + 1);
}

void validate_problem(const CollocationProblem& p) {
    validate_lagrangian(p.A, p.L);
    if (p.L.k < 1 || 2 * p.L.k > kMaxJetOrder)
        throw std::invalid_argument("solve: order out of range");
    if (static_cast<int>(p.x0.size()) != p.A.m)
        throw std::invalid_argument("solve: x0 must have m components");
    if (!(p.t1 > p.t0)) throw std::invalid_argument("solve: need t1 > t0");
    if (p.degree < 1) throw std::invalid_argument("solve: ansatz degree must be >= 1");
    if (default_nodes(p) < p.degree + 1)
        throw std::invalid_argument("solve: need at least degree+1 collocation nodes");
    for (const auto& e : p.boundary) {
        switch (e.kind) {
        case BoundaryEntry::Kind::Fiber:
            if (e.index < 0 || e.index >= p.A.r || e.order < 0 || e.order > p.L.k - 1)
                throw std::invalid_argument("solve: fiber boundary entry out of range");
            break;
        case BoundaryEntry::Kind::Base:
            if (e.index < 0 || e.index >= p.A.m)
                throw std::invalid_argument("solve: base boundary entry out of range");
            break;
        case BoundaryEntry::Kind::FreeMomentum:
            if (e.index < 0 || e.index >= p.A.r || e.order < 0 || e.order > p.L.k - 1)
                throw std::invalid_argument("solve: momentum boundary entry out of range");
            break;
        }
    }
    if (p.external_force) {
        if (static_cast<int>(p.external_force->size()) != p.A.r)
            throw std::invalid_argument("solve: external force must have r components");
        for (const auto& f : *p.external_force)
            for (const auto& v : free_vars(f))
                if (v != "t")
                    throw std::invalid_argument("solve: external force may only depend on t");
    }
}

// Residual vector, generic over the ring: force rows (per node, per fiber
// component), then penalty-weighted boundary rows.
template <class S>
std::vector<S> residual_vector(const CollocationProblem& p, const AdmissiblePath& ap,
                               const std::vector<double>& ts, const Env<S>& coefenv,
                               const S& proto, double wb) {
    PathEval<S> pe(p.A, ap, coefenv, proto);
    std::vector<S> out;
    out.reserve(ts.size() * static_cast<std::size_t>(p.A.r) + p.boundary.size());
    for (double t : ts) {
        auto F = force_components(p.L, pe, t);
        if (p.external_force) {
            Env<S> tenv;
            tenv.emplace("t", ring_constant_like(proto, t));
            for (int i = 0; i < p.A.r; ++i)
                F[static_cast<std::size_t>(i)] =
                    F[static_cast<std::size_t>(i)] -
                    eval((*p.external_force)[static_cast<std::size_t>(i)], tenv, proto);
        }
        for (auto& v : F) out.push_back(std::move(v));
    }
    bool have_momentum[2] = {false, false};
    std::vector<std::vector<S>> mom[2];
    for (const auto& e : p.boundary)
        if (e.kind == BoundaryEntry::Kind::FreeMomentum) {
            const int side = e.at_end ? 1 : 0;
            if (!have_momentum[side]) {
                mom[side] = momentum_components(p.L, pe, e.at_end ? p.t1 : p.t0);
                have_momentum[side] = true;
            }
        }
    for (const auto& e : p.boundary) {
        const double t = e.at_end ? p.t1 : p.t0;
        S res = proto;
        switch (e.kind) {
        case BoundaryEntry::Kind::Fiber:
            res = pe.y_jets(t, e.order)[static_cast<std::size_t>(e.index)]
                      .c[static_cast<std::size_t>(e.order)] -
                  e.value;
            break;
        case BoundaryEntry::Kind::Base:
            res = pe.x_at(t)[static_cast<std::size_t>(e.index)] - e.value;
            break;
        case BoundaryEntry::Kind::FreeMomentum:
            res = mom[e.at_end ? 1 : 0][static_cast<std::size_t>(e.index)]
                     [static_cast<std::size_t>(e.order)];
            break;
        }
        out.push_back(wb * res);
    }
    return out;
}

struct Metrics {
    double objective = 0.0;
    double force_sup = 0.0;
    double boundary_sup = 0.0;
};

Metrics metrics_of(const std::vector<double>& r, std::size_t nforce, double wb) {
    Metrics m;
    for (std::size_t row = 0; row < r.size(); ++row) {
        m.objective += r[row] * r[row];
        if (row < nforce)
            m.force_sup = std::max(m.force_sup, std::abs(r[row]));
        else
            m.boundary_sup = std::max(m.boundary_sup, std::abs(r[row]) / wb);
    }
    return m;
}

Env<double> coef_env_values(const CollocationProblem& p,
                            const std::vector<std::vector<double>>& coeffs) {
    Env<double> env;
    for (int i = 0; i < p.A.r; ++i)
        for (int j = 0; j <= p.degree; ++j)
            env.emplace(coef_name(i, j),
                        coeffs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    return env;
}

std::vector<std::vector<double>> initial_guess(const CollocationProblem& p) {
    std::vector<std::vector<double>> coeffs(
        static_cast<std::size_t>(p.A.r), std::vector<double>(static_cast<std::size_t>(p.degree) + 1, 0.0));
    for (int i = 0; i < p.A.r; ++i) {
        bool has0 = false, has1 = false;
        double v0 = 0.0, v1 = 0.0;
        for (const auto& e : p.boundary)
            if (e.kind == BoundaryEntry::Kind::Fiber && e.index == i && e.order == 0) {
                (e.at_end ? has1 : has0) = true;
                (e.at_end ? v1 : v0) = e.value;
            }
        auto& row = coeffs[static_cast<std::size_t>(i)];
        if (has0 && has1) {
            row[0] = v0;
            if (p.degree >= 1) row[1] = (v1 - v0) / (p.t1 - p.t0);
        } else if (has0) {
            row[0] = v0;
        } else if (has1) {
            row[0] = v1;
        }
    }
    return coeffs;
}

} // namespace

std::vector<double> chebyshev_nodes(double t0, double t1, int n) {
    if (n < 1) throw std::invalid_argument("chebyshev_nodes: n >= 1 required");
    const double pi = std::acos(-1.0);
    const double mid = 0.5 * (t0 + t1);
    const double half = 0.5 * (t1 - t0);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        out.push_back(mid - half * std::cos(pi * (2.0 * j + 1.0) / (2.0 * n)));
    return out;
}

AdmissiblePath coefficients_path(const CollocationProblem& p,
                                 const std::vector<std::vector<double>>& coeffs) {
    if (static_cast<int>(coeffs.size()) != p.A.r)
        throw std::invalid_argument("coefficients_path: need r coefficient rows");
    AdmissiblePath ap;
    ap.x0 = p.x0;
    ap.t0 = p.t0;
    ap.t1 = p.t1;
    ap.steps = p.flow_steps;
    ap.y.reserve(coeffs.size());
    for (int i = 0; i < p.A.r; ++i) {
        const auto& row = coeffs[static_cast<std::size_t>(i)];
        if (static_cast<int>(row.size()) != p.degree + 1)
            throw std::invalid_argument("coefficients_path: need degree+1 coefficients per row");
        ap.y.push_back(ansatz_expr(p.t0, p.degree,
                                   [&](int j) { return mk_number(row[static_cast<std::size_t>(j)]); }));
    }
    return ap;
}

SolveResult solve(const CollocationProblem& p) {
    validate_problem(p);
    const int N = default_nodes(p);
    const std::vector<double> ts = chebyshev_nodes(p.t0, p.t1, N);
    const AdmissiblePath ap = ansatz_path_vars(p);
    const double wb = std::sqrt(p.penalty);
    const std::size_t nforce = ts.size() * static_cast<std::size_t>(p.A.r);
    const int ncoef = p.A.r * (p.degree + 1);

    SolveResult out;
    out.coeffs = initial_guess(p);

    auto eval_double = [&](const std::vector<std::vector<double>>& coeffs) {
        return residual_vector<double>(p, ap, ts, coef_env_values(p, coeffs), 0.0, wb);
    };
    auto eval_jacobian = [&](const std::vector<std::vector<double>>& coeffs) {
        using S = Jet<double>;
        const S proto = S::constant(1, 0.0);
        Eigen::MatrixXd J(static_cast<Eigen::Index>(nforce + p.boundary.size()), ncoef);
        int col = 0;
        for (int i = 0; i < p.A.r; ++i)
            for (int j = 0; j <= p.degree; ++j, ++col) {
                Env<S> env;
                for (int ii = 0; ii < p.A.r; ++ii)
                    for (int jj = 0; jj <= p.degree; ++jj) {
                        S v = S::constant(1, coeffs[static_cast<std::size_t>(ii)]
                                                  [static_cast<std::size_t>(jj)]);
                        if (ii == i && jj == j) v.c[1] = 1.0;
                        env.emplace(coef_name(ii, jj), std::move(v));
                    }
                const auto rcol = residual_vector<S>(p, ap, ts, env, proto, wb);
                for (std::size_t row = 0; row < rcol.size(); ++row)
                    J(static_cast<Eigen::Index>(row), col) = rcol[row].c[1];
            }
        return J;
    };

    std::vector<double> r = eval_double(out.coeffs);
    Metrics cur = metrics_of(r, nforce, wb);
    out.residual_history.push_back(std::sqrt(cur.objective));

    double lambda = p.lambda0;
    Eigen::MatrixXd J;
    bool have_final_jacobian = false;
    int attempts = 0;
    int accepted_steps = 0;
    while (attempts < p.max_iter) {
        if (cur.objective <= 1e-28) break;
        J = eval_jacobian(out.coeffs);
        have_final_jacobian = true;
        const Eigen::VectorXd rv =
            Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size()));
        const Eigen::MatrixXd H = J.transpose() * J;
        const Eigen::VectorXd g = J.transpose() * rv;

        bool accepted = false;
        while (attempts < p.max_iter) {
            ++attempts;
            Eigen::MatrixXd Hd = H;
            for (int d = 0; d < ncoef; ++d) Hd(d, d) += lambda;
            const Eigen::VectorXd step = Hd.ldlt().solve(-g);
            if (!step.allFinite()) {
                lambda *= 4.0;
                if (lambda > 1e15) break;
                continue;
            }
            auto trial = out.coeffs;
            int col = 0;
            for (int i = 0; i < p.A.r; ++i)
                for (int j = 0; j <= p.degree; ++j, ++col)
                    trial[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += step(col);
            std::vector<double> rt;
            Metrics mt;
            bool finite = true;
            try {
                rt = eval_double(trial);
                mt = metrics_of(rt, nforce, wb);
                finite = std::isfinite(mt.objective);
            } catch (const std::exception&) {
                finite = false;
            }
            if (finite && mt.objective < cur.objective) {
                const double gain = cur.objective - mt.objective;
                out.coeffs = std::move(trial);
                r = std::move(rt);
                cur = mt;
                out.residual_history.push_back(std::sqrt(cur.objective));
                lambda = std::max(lambda * 0.5, 1e-14);
                accepted = true;
                ++accepted_steps;
                if (gain <= 1e-30) attempts = p.max_iter; // stagnated at the floor
                break;
            }
            lambda *= 4.0;
            if (lambda > 1e15) break;
        }
        if (!accepted) break; // damping exhausted: keep best iterate
    }
    out.iterations = accepted_steps;
    out.force_sup = cur.force_sup;
    out.boundary_sup = cur.boundary_sup;
    out.converged = cur.force_sup <= p.force_tol && cur.boundary_sup <= p.boundary_tol;

    if (!have_final_jacobian) J = eval_jacobian(out.coeffs);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
    const double smax = svd.singularValues().maxCoeff();
    const double smin = svd.singularValues().minCoeff();
    out.jacobian_singular = !(smin > smax * 1e-12);
    out.jacobian_condition =
        smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (out.converged)
        out.message = "converged";
    else if (out.jacobian_singular)
        out.message = "not converged: Jacobian numerically singular (degenerate problem?)";
    else
        out.message = "not converged: best iterate returned";
    return out;
}

SolutionReport verify_solution(const CollocationProblem& p,
                               const std::vector<std::vector<double>>& coeffs) {
    validate_problem(p);
    SolutionReport rep;
    rep.force_tol = p.force_tol;
    rep.boundary_tol = p.boundary_tol;

    const int N = 4 * default_nodes(p);
    const std::vector<double> ts = chebyshev_nodes(p.t0, p.t1, N);
    const AdmissiblePath ap = coefficients_path(p, coeffs);
    const double wb = std::sqrt(p.penalty);
    const auto r = residual_vector<double>(p, ap, ts, Env<double>{}, 0.0, wb);
    const Metrics m = metrics_of(r, ts.size() * static_cast<std::size_t>(p.A.r), wb);
    rep.force_sup = m.force_sup;
    rep.boundary_sup = m.boundary_sup;

    bool any_free = false;
    for (const auto& e : p.boundary)
        if (e.kind == BoundaryEntry::Kind::FreeMomentum) any_free = true;
    if (any_free) {
        // Only the directions explicitly left free carry a transversality
        // requirement; their residuals are the momentum components.
        rep.trans.tol = p.boundary_tol;
        PathEval<double> pe(p.A, ap, {}, 0.0);
        const auto m0 = momentum_components(p.L, pe, p.t0);
        const auto m1 = momentum_components(p.L, pe, p.t1);
        for (const auto& e : p.boundary)
            if (e.kind == BoundaryEntry::Kind::FreeMomentum)
                rep.trans.residuals.push_back(
                    std::abs((e.at_end ? m1 : m0)[static_cast<std::size_t>(e.index)]
                                 [static_cast<std::size_t>(e.order)]));
        for (double v : rep.trans.residuals) rep.trans.worst = std::max(rep.trans.worst, v);
        rep.trans.pass = rep.trans.worst <= rep.trans.tol;
    } else {
        BoundaryCondition bc;
        bc.kind = BoundaryCondition::Kind::Fixed;
        rep.trans = transversality_check(p.A, p.L, ap, bc, p.boundary_tol);
    }
    rep.pass = rep.force_sup <= rep.force_tol && rep.boundary_sup <= rep.boundary_tol &&
               rep.trans.pass;
    return rep;
}

} // namespace alvc
