// Lagrangians on the k-th order space, admissible paths (generator curve
// plus the base flow it induces), and the force/momentum pipeline:
//
//   force_i(t)     = alternating-binomial contraction of the time-jet block
//                    of eps_k(dL) along the path,
//   momentum(t)    = the order-(k-1) integration-by-parts kernel of the same
//                    block.
//
// Closed-form reference implementations for several classical families live
// in oracle_el; they differentiate the Lagrangian directly and never touch
// the eps_k pipeline, so agreement between the two is a meaningful check.

#pragma once

#include "alvc/expr.hpp"
#include "alvc/prolong.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace alvc {

// Coordinate naming shared by Lagrangians, problem files and docs:
// base x1..xm, fiber y{i}_{alpha} with alpha starting at 0.
inline std::string fiber_name(int i, int alpha) {
    return "y" + std::to_string(i + 1) + "_" + std::to_string(alpha);
}

struct Lagrangian {
    int k = 1;
    Expr expr;
};

// Throws if the expression uses names outside x1..xm, y1_0..yr_{k-1}.
void validate_lagrangian(const AlgebroidStructure& A, const Lagrangian& L);

struct AdmissiblePath {
    std::vector<Expr> y;     // r generator expressions in t
    std::vector<double> x0;  // base start point (size m)
    double t0 = 0.0, t1 = 1.0;
    int steps = 1000;        // base-flow grid resolution
};

struct ForceSample {
    double t = 0.0;
    std::vector<double> F;
};

struct MomentumSample {
    double t = 0.0;
    std::vector<std::vector<double>> m; // m[i][beta], beta = 0..k-1
    std::vector<Jet<double>> basejet;   // order k-1
};

struct EkTangent {
    std::vector<double> dx;
    std::vector<std::vector<double>> dy;
};

struct BoundaryCondition {
    enum class Kind { Fixed, Free, Spanned } kind = Kind::Fixed;
    // For Spanned: pairs of generator curves (b at t0, b at t1) spanning the
    // admissible endpoint set.
    std::vector<std::pair<std::vector<Expr>, std::vector<Expr>>> span;
};

struct TransversalityReport {
    bool pass = true;
    double worst = 0.0;
    std::vector<double> residuals;
    double tol = 0.0;
};

enum class ElFamily { Tangent, AlgebroidK1, AlgebroidK2, EulerPoincare, HamelK2 };

// ---------------------------------------------------------------------------
// PathEval: the admissible lift of a generator curve, generic over the
// scalar ring so sensitivities can ride along.  The base flow is a
// fixed-step classical Runge-Kutta grid; values between grid points come
// from a local re-expansion of the exact jet recurrence, and base jets of
// any order are rebuilt on demand from that same recurrence.
// ---------------------------------------------------------------------------

template <class S>
class PathEval {
public:
    PathEval(const AlgebroidStructure& A, AdmissiblePath path, Env<S> extra, S proto)
        : A_(&A), path_(std::move(path)), extra_(std::move(extra)), proto_(std::move(proto)) {
        if (static_cast<int>(path_.y.size()) != A.r)
            throw std::invalid_argument("path: generator must have r components");
        if (static_cast<int>(path_.x0.size()) != A.m)
            throw std::invalid_argument("path: x0 must have m components");
        if (path_.steps < 1) throw std::invalid_argument("path: steps >= 1 required");
        if (!(path_.t1 > path_.t0)) throw std::invalid_argument("path: need t1 > t0");
        integrate();
    }

    const AlgebroidStructure& algebroid() const { return *A_; }
    const AdmissiblePath& path() const { return path_; }
    const S& proto() const { return proto_; }

    // Generator components as jets of order `order` at time t.
    std::vector<Jet<S>> y_jets(double t, int order) const {
        Env<Jet<S>> env = lifted_env(order);
        env.insert_or_assign("t", Jet<S>::variable(order, ring_constant_like(proto_, t)));
        std::vector<Jet<S>> out;
        out.reserve(path_.y.size());
        const Jet<S> jproto = Jet<S>::constant(order, proto_);
        for (const auto& e : path_.y) out.push_back(eval(e, env, jproto));
        return out;
    }

    std::vector<S> y_values(double t) const {
        Env<S> env = extra_;
        env.insert_or_assign("t", ring_constant_like(proto_, t));
        std::vector<S> out;
        out.reserve(path_.y.size());
        for (const auto& e : path_.y) out.push_back(eval(e, env, proto_));
        return out;
    }

    // Base point by dense output of the flow grid.
    std::vector<S> x_at(double t) const {
        if (A_->m == 0) return {};
        const double h = (path_.t1 - path_.t0) / path_.steps;
        long j = std::lround((t - path_.t0) / h);
        j = std::max(0L, std::min(static_cast<long>(path_.steps), j));
        const double tj = path_.t0 + static_cast<double>(j) * h;
        const double dt = t - tj;
        const auto& xg = grid_[static_cast<std::size_t>(j)];
        if (dt == 0.0) return xg;
        const int q = std::min(8, kMaxJetOrder);
        const auto xj = base_jets_at(tj, xg, q);
        std::vector<S> out;
        out.reserve(xj.size());
        for (const auto& jet : xj) out.push_back(jet_eval_poly(jet, dt));
        return out;
    }

    // Base jets of the requested order at time t, from the admissibility
    // recurrence (exact given the base point).
    std::vector<Jet<S>> x_jets(double t, int order) const {
        return base_jets_at(t, x_at(t), order);
    }

    // The k-th order point along the lift, with every component a t-jet of
    // order `jet_order`.
    EkPointT<Jet<S>> point_tjets(double t, int k, int jet_order) const {
        EkPointT<Jet<S>> pt;
        pt.k = k;
        pt.x = x_jets(t, jet_order);
        const auto yfull = y_jets(t, jet_order + k - 1);
        pt.y.resize(static_cast<std::size_t>(A_->r));
        for (int i = 0; i < A_->r; ++i)
            for (int al = 0; al < k; ++al)
                pt.y[static_cast<std::size_t>(i)].push_back(
                    jet_truncate(jet_derivative(yfull[static_cast<std::size_t>(i)], al), jet_order));
        return pt;
    }

    // Plain k-th order point (scalar components).
    EkPointT<S> point(double t, int k) const {
        EkPointT<S> pt;
        pt.k = k;
        pt.x = x_at(t);
        const auto yj = y_jets(t, k - 1);
        pt.y.resize(static_cast<std::size_t>(A_->r));
        for (int i = 0; i < A_->r; ++i)
            pt.y[static_cast<std::size_t>(i)] = yj[static_cast<std::size_t>(i)].c;
        return pt;
    }

private:
    Env<Jet<S>> lifted_env(int order) const {
        Env<Jet<S>> env;
        for (const auto& [name, v] : extra_) env.emplace(name, Jet<S>::constant(order, v));
        return env;
    }

    std::vector<Jet<S>> base_jets_at(double t, const std::vector<S>& xval, int order) const {
        if (A_->m == 0) return {};
        EkPointT<S> e;
        e.k = order;
        e.x = xval;
        const auto yj = y_jets(t, order - 1);
        e.y.resize(static_cast<std::size_t>(A_->r));
        for (int i = 0; i < A_->r; ++i) e.y[static_cast<std::size_t>(i)] = yj[static_cast<std::size_t>(i)].c;
        return embed_Ek(*A_, e);
    }

    std::vector<S> flow_rhs(double t, const std::vector<S>& x) const {
        return anchor_apply(*A_, x, y_values(t), proto_);
    }

    void integrate() {
        grid_.clear();
        if (A_->m == 0) return;
        std::vector<S> x;
        x.reserve(static_cast<std::size_t>(A_->m));
        for (double v : path_.x0) x.push_back(ring_constant_like(proto_, v));
        grid_.push_back(x);
        const double h = (path_.t1 - path_.t0) / path_.steps;
        for (int s = 0; s < path_.steps; ++s) {
            const double t = path_.t0 + s * h;
            const auto k1 = flow_rhs(t, x);
            const auto k2 = flow_rhs(t + 0.5 * h, axpy(x, 0.5 * h, k1));
            const auto k3 = flow_rhs(t + 0.5 * h, axpy(x, 0.5 * h, k2));
            const auto k4 = flow_rhs(t + h, axpy(x, h, k3));
            for (std::size_t a = 0; a < x.size(); ++a)
                x[a] = x[a] + (h / 6.0) * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
            for (const auto& comp : x)
                if (!std::isfinite(leading_value(comp)))
                    throw std::runtime_error("base flow diverged (non-finite state)");
            grid_.push_back(x);
        }
    }

    static std::vector<S> axpy(const std::vector<S>& x, double a, const std::vector<S>& v) {
        std::vector<S> out = x;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = out[i] + a * v[i];
        return out;
    }

    const AlgebroidStructure* A_;
    AdmissiblePath path_;
    Env<S> extra_;
    S proto_;
    std::vector<std::vector<S>> grid_;
};

// ---------------------------------------------------------------------------
// Gradient of an expression Lagrangian at a ring-valued point, one order-1
// seed per coordinate.
// ---------------------------------------------------------------------------

template <class R>
EkCovectorT<R> dL_at(const AlgebroidStructure& A, const Lagrangian& L, const EkPointT<R>& pt,
                     const R& proto) {
    EkCovectorT<R> psi;
    psi.base = pt;
    using R1 = Jet<R>;
    const R1 jproto = R1::constant(1, proto);
    Env<R1> env;
    for (int a = 0; a < A.m; ++a)
        env.emplace(A.base_name(a), R1::constant(1, pt.x[static_cast<std::size_t>(a)]));
    for (int i = 0; i < A.r; ++i)
        for (int al = 0; al < pt.k; ++al)
            env.emplace(fiber_name(i, al),
                        R1::constant(1, pt.y[static_cast<std::size_t>(i)][static_cast<std::size_t>(al)]));
    auto seeded = [&](const std::string& name) {
        auto it = env.find(name);
        it->second.c[1] = ring_constant_like(proto, 1.0);
        const R1 g = eval(L.expr, env, jproto);
        it->second.c[1] = ring_constant_like(proto, 0.0);
        return g.c[1];
    };
    psi.dx.reserve(static_cast<std::size_t>(A.m));
    for (int a = 0; a < A.m; ++a) psi.dx.push_back(seeded(A.base_name(a)));
    psi.dy.resize(static_cast<std::size_t>(A.r));
    for (int i = 0; i < A.r; ++i)
        for (int al = 0; al < pt.k; ++al)
            psi.dy[static_cast<std::size_t>(i)].push_back(seeded(fiber_name(i, al)));
    return psi;
}

// ---------------------------------------------------------------------------
// The block of time-jets of eps_k(dL) along the path: the common core of
// force and momentum.
// ---------------------------------------------------------------------------

template <class S>
SemiHolonomicBlockT<S> lambda_block(const Lagrangian& L, const PathEval<S>& pe, double t,
                                    double holonomy_tol = 1e-6) {
    const AlgebroidStructure& A = pe.algebroid();
    const int k = L.k;
    using T = Jet<S>;
    const EkPointT<T> pt = pe.point_tjets(t, k, k);
    const T tproto = T::constant(k, pe.proto());
    const EkCovectorT<T> psi = dL_at(A, L, pt, tproto);
    const TkCovectorT<T> tk =
        eps_k(A, psi, static_cast<const EkExtensionT<T>*>(nullptr), holonomy_tol);

    SemiHolonomicBlockT<S> blk;
    blk.k = k;
    blk.basejet = pe.x_jets(t, 2 * k);
    blk.xi.resize(static_cast<std::size_t>(A.r));
    for (int i = 0; i < A.r; ++i) {
        auto& slab = blk.xi[static_cast<std::size_t>(i)];
        slab.resize(static_cast<std::size_t>(k) + 1);
        for (int al = 0; al <= k; ++al)
            for (int be = 0; be <= k; ++be)
                slab[static_cast<std::size_t>(al)].push_back(
                    tk.xi[static_cast<std::size_t>(i)][static_cast<std::size_t>(be)]
                        .c[static_cast<std::size_t>(al)]);
    }
    return blk;
}

template <class S>
std::vector<S> force_components(const Lagrangian& L, const PathEval<S>& pe, double t) {
    return upsilon(lambda_block(L, pe, t));
}

// m[i][beta] for beta = 0..k-1 (and optionally the time derivative block).
template <class S>
std::vector<std::vector<S>> momentum_components(const Lagrangian& L, const PathEval<S>& pe,
                                                double t,
                                                std::vector<std::vector<S>>* rate_out = nullptr) {
    const auto blk = lambda_block(L, pe, t);
    if (rate_out != nullptr) *rate_out = momenta_map_at(blk, L.k - 1, 1);
    return momenta_map_at(blk, L.k - 1, 0);
}

// ---------------------------------------------------------------------------
// Numeric front ends
// ---------------------------------------------------------------------------

// Default cap on the variational order; 2k jet levels must fit the jet
// arithmetic range.
inline constexpr int kDefaultMaxOrder = 6;

PathEval<double> integrate_base(const AlgebroidStructure& A, const AdmissiblePath& path);

ForceSample force(const AlgebroidStructure& A, const Lagrangian& L, const AdmissiblePath& path,
                  double t, int max_order = kDefaultMaxOrder);
std::vector<ForceSample> force_samples(const AlgebroidStructure& A, const Lagrangian& L,
                                       const AdmissiblePath& path, const std::vector<double>& ts,
                                       int max_order = kDefaultMaxOrder);

MomentumSample momentum(const AlgebroidStructure& A, const Lagrangian& L,
                        const AdmissiblePath& path, double t, int max_order = kDefaultMaxOrder);
std::vector<MomentumSample> momentum_samples(const AlgebroidStructure& A, const Lagrangian& L,
                                             const AdmissiblePath& path,
                                             const std::vector<double>& ts,
                                             int max_order = kDefaultMaxOrder);

// The admissible variation generated by b, read off through the duality
// pairing against the coordinate covector basis.
EkTangent variation_apply(const AlgebroidStructure& A, const AdmissiblePath& path,
                          const std::vector<Expr>& b, double t, int k);

double action(const AlgebroidStructure& A, const Lagrangian& L, const AdmissiblePath& path);

std::vector<double> oracle_el(const AlgebroidStructure& A, const Lagrangian& L,
                              const AdmissiblePath& path, double t, ElFamily family);

TransversalityReport transversality_check(const AlgebroidStructure& A, const Lagrangian& L,
                                          const AdmissiblePath& path, const BoundaryCondition& bc,
                                          double tol = 1e-8);

// Env for evaluating a Lagrangian at a plain numeric point.
Env<double> point_env(const AlgebroidStructure& A, const EkPoint& pt);

} // namespace alvc
