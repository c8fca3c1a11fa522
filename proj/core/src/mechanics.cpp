#include "alvc/mechanics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace alvc {

void validate_lagrangian(const AlgebroidStructure& A, const Lagrangian& L) {
    if (L.k < 1) throw std::invalid_argument("Lagrangian order must be >= 1");
    std::set<std::string> allowed;
    for (int a = 0; a < A.m; ++a) allowed.insert(A.base_name(a));
    for (int i = 0; i < A.r; ++i)
        for (int al = 0; al < L.k; ++al) allowed.insert(fiber_name(i, al));
    for (const auto& v : free_vars(L.expr))
        if (allowed.find(v) == allowed.end())
            throw std::invalid_argument("Lagrangian uses unknown coordinate '" + v +
                                        "' (expected x1..x" + std::to_string(A.m) +
                                        ", y{i}_{0.." + std::to_string(L.k - 1) + "})");
}

Env<double> point_env(const AlgebroidStructure& A, const EkPoint& pt) {
    Env<double> env;
    for (int a = 0; a < A.m; ++a)
        env.emplace(A.base_name(a), pt.x[static_cast<std::size_t>(a)]);
    for (int i = 0; i < A.r; ++i)
        for (int al = 0; al < pt.k; ++al)
            env.emplace(fiber_name(i, al),
                        pt.y[static_cast<std::size_t>(i)][static_cast<std::size_t>(al)]);
    return env;
}

PathEval<double> integrate_base(const AlgebroidStructure& A, const AdmissiblePath& path) {
    return PathEval<double>(A, path, {}, 0.0);
}

namespace {

void require_order(const Lagrangian& L, int max_order) {
    if (L.k < 1) throw std::invalid_argument("variational order must be >= 1");
    if (L.k > max_order)
        throw std::invalid_argument("variational order " + std::to_string(L.k) +
                                    " exceeds the cap of " + std::to_string(max_order) +
                                    " (pass a larger max_order to override)");
    if (2 * L.k > kMaxJetOrder)
        throw std::invalid_argument("variational order " + std::to_string(L.k) +
                                    " needs time jets beyond the supported range");
}

} // namespace

ForceSample force(const AlgebroidStructure& A, const Lagrangian& L, const AdmissiblePath& path,
                  double t, int max_order) {
    require_order(L, max_order);
    validate_lagrangian(A, L);
    PathEval<double> pe(A, path, {}, 0.0);
    return ForceSample{t, force_components(L, pe, t)};
}

std::vector<ForceSample> force_samples(const AlgebroidStructure& A, const Lagrangian& L,
                                       const AdmissiblePath& path, const std::vector<double>& ts,
                                       int max_order) {
    require_order(L, max_order);
    validate_lagrangian(A, L);
    PathEval<double> pe(A, path, {}, 0.0);
    std::vector<ForceSample> out;
    out.reserve(ts.size());
    for (double t : ts) out.push_back(ForceSample{t, force_components(L, pe, t)});
    return out;
}

MomentumSample momentum(const AlgebroidStructure& A, const Lagrangian& L,
                        const AdmissiblePath& path, double t, int max_order) {
    require_order(L, max_order);
    validate_lagrangian(A, L);
    PathEval<double> pe(A, path, {}, 0.0);
    MomentumSample s;
    s.t = t;
    s.m = momentum_components(L, pe, t);
    s.basejet = pe.x_jets(t, L.k - 1);
    return s;
}

std::vector<MomentumSample> momentum_samples(const AlgebroidStructure& A, const Lagrangian& L,
                                             const AdmissiblePath& path,
                                             const std::vector<double>& ts, int max_order) {
    require_order(L, max_order);
    validate_lagrangian(A, L);
    PathEval<double> pe(A, path, {}, 0.0);
    std::vector<MomentumSample> out;
    out.reserve(ts.size());
    for (double t : ts) {
        MomentumSample s;
        s.t = t;
        s.m = momentum_components(L, pe, t);
        s.basejet = pe.x_jets(t, L.k - 1);
        out.push_back(std::move(s));
    }
    return out;
}

EkTangent variation_apply(const AlgebroidStructure& A, const AdmissiblePath& path,
                          const std::vector<Expr>& b, double t, int k) {
    if (static_cast<int>(b.size()) != A.r)
        throw std::invalid_argument("variation_apply: generator must have r components");
    if (k < 1 || 2 * k > kMaxJetOrder)
        throw std::invalid_argument("variation_apply: order out of range");
    PathEval<double> pe(A, path, {}, 0.0);
    const EkPoint pt = pe.point(t, k);

    Env<Jet<double>> env;
    env.emplace("t", Jet<double>::variable(k, t));
    const Jet<double> jproto = Jet<double>::constant(k, 0.0);
    std::vector<std::vector<double>> bf;
    bf.reserve(b.size());
    for (const auto& e : b) bf.push_back(eval(e, env, jproto).c);

    EkCovector psi;
    psi.base = pt;
    psi.dx.assign(static_cast<std::size_t>(A.m), 0.0);
    psi.dy.assign(static_cast<std::size_t>(A.r), std::vector<double>(static_cast<std::size_t>(k), 0.0));
    auto pair_with = [&]() {
        const TkCovector tk = eps_k(A, psi);
        return pairing_Tk(tk.xi, bf);
    };

    EkTangent out;
    out.dx.assign(static_cast<std::size_t>(A.m), 0.0);
    out.dy.assign(static_cast<std::size_t>(A.r), std::vector<double>(static_cast<std::size_t>(k), 0.0));
    for (int a = 0; a < A.m; ++a) {
        psi.dx[static_cast<std::size_t>(a)] = 1.0;
        out.dx[static_cast<std::size_t>(a)] = pair_with();
        psi.dx[static_cast<std::size_t>(a)] = 0.0;
    }
    for (int i = 0; i < A.r; ++i)
        for (int al = 0; al < k; ++al) {
            psi.dy[static_cast<std::size_t>(i)][static_cast<std::size_t>(al)] = 1.0;
            out.dy[static_cast<std::size_t>(i)][static_cast<std::size_t>(al)] = pair_with();
            psi.dy[static_cast<std::size_t>(i)][static_cast<std::size_t>(al)] = 0.0;
        }
    return out;
}

double action(const AlgebroidStructure& A, const Lagrangian& L, const AdmissiblePath& path) {
    validate_lagrangian(A, L);
    if (2 * L.k > kMaxJetOrder)
        throw std::invalid_argument("action: order out of range");
    PathEval<double> pe(A, path, {}, 0.0);
    const int n = path.steps + (path.steps % 2); // composite Simpson needs even n
    const double h = (path.t1 - path.t0) / n;
    auto f = [&](double t) { return eval(L.expr, point_env(A, pe.point(t, L.k))); };
    double acc = f(path.t0) + f(path.t1);
    for (int j = 1; j < n; ++j) acc += (j % 2 == 1 ? 4.0 : 2.0) * f(path.t0 + j * h);
    return acc * h / 3.0;
}

namespace {

constexpr double kStructureTol = 1e-9;

// The closed-form families differentiate L directly through time jets; the
// gradients arrive as order-k jets whose coefficient alpha is the alpha-th
// time derivative along the path.
struct GradJets {
    EkPointT<Jet<double>> pt;
    EkCovectorT<Jet<double>> psi;
    std::vector<double> x;                            // base point values
    std::vector<double> y;                            // y^{i,(0)} values
    std::vector<std::vector<double>> rho;             // rho[a][i] at x
    std::vector<std::vector<std::vector<double>>> c;  // c[k][i][j] at x
};

GradJets gradient_jets(const AlgebroidStructure& A, const Lagrangian& L,
                       const PathEval<double>& pe, double t) {
    GradJets g;
    const int k = L.k;
    g.pt = pe.point_tjets(t, k, k);
    g.psi = dL_at(A, L, g.pt, Jet<double>::constant(k, 0.0));
    g.x = pe.x_at(t);
    const auto yv = pe.y_values(t);
    g.y = yv;
    g.rho = rho_eval(A, g.x, 0.0);
    g.c = c_eval(A, g.x, 0.0);
    return g;
}

void require_tangent_structure(const AlgebroidStructure& A, const GradJets& g) {
    if (A.m != A.r)
        throw std::invalid_argument("tangent oracle: structure must have m == r");
    for (int a = 0; a < A.m; ++a)
        for (int i = 0; i < A.r; ++i) {
            const double want = (a == i) ? 1.0 : 0.0;
            if (std::abs(g.rho[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] - want) >
                kStructureTol)
                throw std::invalid_argument("tangent oracle: anchor is not the identity");
        }
    for (const auto& slab : g.c)
        for (const auto& row : slab)
            for (double v : row)
                if (std::abs(v) > kStructureTol)
                    throw std::invalid_argument("tangent oracle: structure functions must vanish");
}

std::vector<double> el_tangent(const AlgebroidStructure& A, const Lagrangian& L,
                               const GradJets& g) {
    require_tangent_structure(A, g);
    const int k = L.k;
    std::vector<double> F(static_cast<std::size_t>(A.r), 0.0);
    for (int a = 0; a < A.r; ++a) {
        double acc = g.psi.dx[static_cast<std::size_t>(a)].c[0];
        for (int al = 1; al <= k; ++al) {
            const double sgn = (al % 2 == 0) ? 1.0 : -1.0;
            acc += sgn * g.psi.dy[static_cast<std::size_t>(a)][static_cast<std::size_t>(al) - 1]
                             .c[static_cast<std::size_t>(al)];
        }
        F[static_cast<std::size_t>(a)] = acc;
    }
    return F;
}

std::vector<double> el_algebroid_k1(const AlgebroidStructure& A, const GradJets& g) {
    std::vector<double> F(static_cast<std::size_t>(A.r), 0.0);
    for (int j = 0; j < A.r; ++j) {
        double acc = -g.psi.dy[static_cast<std::size_t>(j)][0].c[1];
        for (int a = 0; a < A.m; ++a)
            acc += g.rho[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)] *
                   g.psi.dx[static_cast<std::size_t>(a)].c[0];
        for (int kk = 0; kk < A.r; ++kk)
            for (int i = 0; i < A.r; ++i)
                acc += g.c[static_cast<std::size_t>(kk)][static_cast<std::size_t>(i)]
                          [static_cast<std::size_t>(j)] *
                       g.y[static_cast<std::size_t>(i)] *
                       g.psi.dy[static_cast<std::size_t>(kk)][0].c[0];
        F[static_cast<std::size_t>(j)] = acc;
    }
    return F;
}

std::vector<double> el_algebroid_k2(const AlgebroidStructure& A, const GradJets& g) {
    // G_i = d/dt (dL/dy^{i,(1)}) - dL/dy^{i,(0)} as order-1 data from the
    // order-2 gradient jets.
    std::vector<double> G0(static_cast<std::size_t>(A.r)), G1(static_cast<std::size_t>(A.r));
    for (int i = 0; i < A.r; ++i) {
        const auto& Ai = g.psi.dy[static_cast<std::size_t>(i)][0];
        const auto& Bi = g.psi.dy[static_cast<std::size_t>(i)][1];
        G0[static_cast<std::size_t>(i)] = Bi.c[1] - Ai.c[0];
        G1[static_cast<std::size_t>(i)] = Bi.c[2] - Ai.c[1];
    }
    std::vector<double> F(static_cast<std::size_t>(A.r), 0.0);
    for (int i = 0; i < A.r; ++i) {
        double acc = G1[static_cast<std::size_t>(i)];
        for (int kk = 0; kk < A.r; ++kk)
            for (int j = 0; j < A.r; ++j)
                acc += g.c[static_cast<std::size_t>(kk)][static_cast<std::size_t>(i)]
                          [static_cast<std::size_t>(j)] *
                       g.y[static_cast<std::size_t>(j)] * G0[static_cast<std::size_t>(kk)];
        for (int a = 0; a < A.m; ++a)
            acc += g.rho[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] *
                   g.psi.dx[static_cast<std::size_t>(a)].c[0];
        F[static_cast<std::size_t>(i)] = acc;
    }
    return F;
}

std::vector<double> el_euler_poincare(const AlgebroidStructure& A, const Lagrangian& L,
                                      const GradJets& g) {
    if (A.m != 0)
        throw std::invalid_argument("Euler-Poincare oracle: structure must have m == 0");
    const int k = L.k;
    std::vector<double> W(static_cast<std::size_t>(A.r), 0.0),
        Wdot(static_cast<std::size_t>(A.r), 0.0);
    for (int i = 0; i < A.r; ++i)
        for (int al = 0; al < k; ++al) {
            const double sgn = (al % 2 == 0) ? 1.0 : -1.0;
            const auto& jet = g.psi.dy[static_cast<std::size_t>(i)][static_cast<std::size_t>(al)];
            W[static_cast<std::size_t>(i)] += sgn * jet.c[static_cast<std::size_t>(al)];
            Wdot[static_cast<std::size_t>(i)] += sgn * jet.c[static_cast<std::size_t>(al) + 1];
        }
    std::vector<double> F(static_cast<std::size_t>(A.r), 0.0);
    for (int i = 0; i < A.r; ++i) {
        double acc = -Wdot[static_cast<std::size_t>(i)];
        for (int kk = 0; kk < A.r; ++kk)
            for (int j = 0; j < A.r; ++j)
                acc += g.c[static_cast<std::size_t>(kk)][static_cast<std::size_t>(j)]
                          [static_cast<std::size_t>(i)] *
                       g.y[static_cast<std::size_t>(j)] * W[static_cast<std::size_t>(kk)];
        F[static_cast<std::size_t>(i)] = acc;
    }
    return F;
}

std::vector<double> el_hamel_k2(const AlgebroidStructure& A, const GradJets& g) {
    const int n = A.m; // tangent-factor rank; Lie block occupies indices n..r-1
    if (n < 1 || A.r <= n)
        throw std::invalid_argument("product oracle: need a tangent factor and a Lie factor");
    for (int a = 0; a < A.m; ++a)
        for (int i = 0; i < A.r; ++i) {
            const double want = (a == i) ? 1.0 : 0.0;
            if (std::abs(g.rho[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] - want) >
                kStructureTol)
                throw std::invalid_argument("product oracle: anchor must be [I 0]");
        }
    for (int kk = 0; kk < A.r; ++kk)
        for (int i = 0; i < A.r; ++i)
            for (int j = 0; j < A.r; ++j)
                if ((kk < n || i < n || j < n) &&
                    std::abs(g.c[static_cast<std::size_t>(kk)][static_cast<std::size_t>(i)]
                                [static_cast<std::size_t>(j)]) > kStructureTol)
                    throw std::invalid_argument(
                        "product oracle: structure functions must live in the Lie block");

    std::vector<double> F(static_cast<std::size_t>(A.r), 0.0);
    for (int a = 0; a < n; ++a)
        F[static_cast<std::size_t>(a)] = g.psi.dx[static_cast<std::size_t>(a)].c[0] -
                                         g.psi.dy[static_cast<std::size_t>(a)][0].c[1] +
                                         g.psi.dy[static_cast<std::size_t>(a)][1].c[2];
    std::vector<double> W(static_cast<std::size_t>(A.r), 0.0),
        Wdot(static_cast<std::size_t>(A.r), 0.0);
    for (int i = n; i < A.r; ++i) {
        const auto& Ai = g.psi.dy[static_cast<std::size_t>(i)][0];
        const auto& Bi = g.psi.dy[static_cast<std::size_t>(i)][1];
        W[static_cast<std::size_t>(i)] = Ai.c[0] - Bi.c[1];
        Wdot[static_cast<std::size_t>(i)] = Ai.c[1] - Bi.c[2];
    }
    for (int i = n; i < A.r; ++i) {
        double acc = -Wdot[static_cast<std::size_t>(i)];
        for (int kk = n; kk < A.r; ++kk)
            for (int j = n; j < A.r; ++j)
                acc += g.c[static_cast<std::size_t>(kk)][static_cast<std::size_t>(j)]
                          [static_cast<std::size_t>(i)] *
                       g.y[static_cast<std::size_t>(j)] * W[static_cast<std::size_t>(kk)];
        F[static_cast<std::size_t>(i)] = acc;
    }
    return F;
}

} // namespace

std::vector<double> oracle_el(const AlgebroidStructure& A, const Lagrangian& L,
                              const AdmissiblePath& path, double t, ElFamily family) {
    validate_lagrangian(A, L);
    if (2 * L.k > kMaxJetOrder)
        throw std::invalid_argument("oracle_el: order out of range");
    PathEval<double> pe(A, path, {}, 0.0);
    const GradJets g = gradient_jets(A, L, pe, t);
    switch (family) {
    case ElFamily::Tangent:
        return el_tangent(A, L, g);
    case ElFamily::AlgebroidK1:
        if (L.k != 1) throw std::invalid_argument("oracle_el: family requires k = 1");
        return el_algebroid_k1(A, g);
    case ElFamily::AlgebroidK2:
        if (L.k != 2) throw std::invalid_argument("oracle_el: family requires k = 2");
        return el_algebroid_k2(A, g);
    case ElFamily::EulerPoincare:
        return el_euler_poincare(A, L, g);
    case ElFamily::HamelK2:
        if (L.k != 2) throw std::invalid_argument("oracle_el: family requires k = 2");
        return el_hamel_k2(A, g);
    }
    throw std::invalid_argument("oracle_el: unknown family");
}

TransversalityReport transversality_check(const AlgebroidStructure& A, const Lagrangian& L,
                                          const AdmissiblePath& path, const BoundaryCondition& bc,
                                          double tol) {
    require_order(L, kDefaultMaxOrder);
    validate_lagrangian(A, L);
    TransversalityReport rep;
    rep.tol = tol;
    if (bc.kind == BoundaryCondition::Kind::Fixed) {
        rep.pass = true;
        return rep;
    }

    PathEval<double> pe(A, path, {}, 0.0);
    const auto m0 = momentum_components(L, pe, path.t0);
    const auto m1 = momentum_components(L, pe, path.t1);

    if (bc.kind == BoundaryCondition::Kind::Free) {
        for (const auto& block : {m0, m1})
            for (const auto& row : block)
                for (double v : row) rep.residuals.push_back(std::abs(v));
    } else {
        const int kp = L.k - 1;
        const Jet<double> jproto = Jet<double>::constant(kp, 0.0);
        auto fiber_of = [&](const std::vector<Expr>& b, double t) {
            if (static_cast<int>(b.size()) != A.r)
                throw std::invalid_argument("transversality_check: generator must have r components");
            Env<Jet<double>> env;
            env.emplace("t", Jet<double>::variable(kp, t));
            std::vector<std::vector<double>> out;
            out.reserve(b.size());
            for (const auto& e : b) out.push_back(eval(e, env, jproto).c);
            return out;
        };
        for (const auto& [b0, b1] : bc.span) {
            const double v0 = momenta_pairing(m0, fiber_of(b0, path.t0));
            const double v1 = momenta_pairing(m1, fiber_of(b1, path.t1));
            rep.residuals.push_back(std::abs(v1 - v0));
        }
    }
    for (double rres : rep.residuals) rep.worst = std::max(rep.worst, rres);
    rep.pass = rep.worst <= tol;
    return rep;
}

} // namespace alvc
