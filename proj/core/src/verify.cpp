#include "alvc/verify.hpp"

#include "alvc/csv.hpp"
#include "alvc/util.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace alvc {

namespace {

std::string fmt3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return std::string(buf);
}

std::vector<double> sample_times(double t0, double t1, int n) {
    std::vector<double> ts;
    ts.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        ts.push_back(n == 1 ? t0 : t0 + (t1 - t0) * j / (n - 1.0));
    return ts;
}

std::string poly_in_t(Rng& rng, int deg, double amp = 1.0) {
    std::string s;
    for (int j = 0; j <= deg; ++j) {
        if (j > 0) s += "+";
        s += "(" + format_g17(rng.uniform(-amp, amp)) + ")";
        if (j == 1) s += "*t";
        if (j >= 2) s += "*t^" + std::to_string(j);
    }
    return s;
}

AdmissiblePath random_path(Rng& rng, const AlgebroidStructure& A, int deg = 3, double amp = 1.0) {
    AdmissiblePath p;
    p.t0 = 0.0;
    p.t1 = 1.0;
    for (int i = 0; i < A.r; ++i) p.y.push_back(parse(poly_in_t(rng, deg, amp)));
    for (int a = 0; a < A.m; ++a) p.x0.push_back(rng.uniform(-0.5 * amp, 0.5 * amp));
    return p;
}

// Quadratic anchors can push random initial data past a finite-time blow-up
// of the base flow; redraw until the flow stays finite on the interval.
AdmissiblePath safe_random_path(Rng& rng, const AlgebroidStructure& A, int deg = 3,
                                double amp = 1.0) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        AdmissiblePath p = random_path(rng, A, deg, amp);
        try {
            PathEval<double> probe(A, p, {}, 0.0);
            return p;
        } catch (const std::exception&) {
        }
    }
    throw std::runtime_error("safe_random_path: no finite base flow found");
}

std::vector<std::string> coordinate_names(const AlgebroidStructure& A, int k) {
    std::vector<std::string> names;
    for (int a = 0; a < A.m; ++a) names.push_back(A.base_name(a));
    for (int i = 0; i < A.r; ++i)
        for (int al = 0; al < k; ++al) names.push_back(fiber_name(i, al));
    return names;
}

// Positive-definite-ish quadratic form plus random cross terms: smooth,
// polynomial coefficients, non-trivial gradient in every coordinate.
Lagrangian random_lagrangian(Rng& rng, const AlgebroidStructure& A, int k, int cross_terms = 4) {
    const auto names = coordinate_names(A, k);
    std::string s;
    for (const auto& v : names) {
        if (!s.empty()) s += "+";
        s += "(" + format_g17(rng.uniform(0.3, 1.0)) + ")*" + v + "^2";
    }
    for (int n = 0; n < cross_terms; ++n) {
        const auto& u = names[rng.index(names.size())];
        const auto& v = names[rng.index(names.size())];
        s += "+(" + format_g17(rng.uniform(-0.5, 0.5)) + ")*" + u + "*" + v;
    }
    Lagrangian L;
    L.k = k;
    L.expr = parse(s);
    return L;
}

// Polynomial structure on R^2 from the linear action of the traceless 2x2
// matrices: generators act by X1 = x1 d1 - x2 d2, X2 = x2 d1, X3 = x1 d2,
// and the constant bracket table reproduces their commutators, so the
// anchor-compatibility axiom holds exactly.
AlgebroidStructure poly_action_structure() {
    std::vector<std::vector<Expr>> rho = {{parse("x1"), parse("x2"), parse("0")},
                                          {parse("-x2"), parse("0"), parse("x1")}};
    std::vector<std::vector<std::vector<Expr>>> c(
        3, std::vector<std::vector<Expr>>(3, std::vector<Expr>(3, parse("0"))));
    c[1][0][1] = parse("-2");
    c[1][1][0] = parse("2");
    c[2][0][2] = parse("2");
    c[2][2][0] = parse("-2");
    c[0][1][2] = parse("-1");
    c[0][2][1] = parse("1");
    return make_algebroid(2, 3, std::move(rho), std::move(c), "linear-action-r3");
}

// The same structure expressed in the moving frame e0' = e0, e1' = x1 e0 + e1,
// e2' = e2: the anchor stays polynomial while the bracket coefficients become
// base-dependent, exercising derivative terms everywhere.
AlgebroidStructure poly_twisted_structure() {
    std::vector<std::vector<Expr>> rho = {
        {parse("x1"), parse("x1^2+x2"), parse("0")},
        {parse("-x2"), parse("-x1*x2"), parse("x1")}};
    std::vector<std::vector<std::vector<Expr>>> c(
        3, std::vector<std::vector<Expr>>(3, std::vector<Expr>(3, parse("0"))));
    c[0][0][1] = parse("3*x1");
    c[0][1][0] = parse("-3*x1");
    c[1][0][1] = parse("-2");
    c[1][1][0] = parse("2");
    c[2][0][2] = parse("2");
    c[2][2][0] = parse("-2");
    c[0][1][2] = parse("-1");
    c[0][2][1] = parse("1");
    c[2][1][2] = parse("2*x1");
    c[2][2][1] = parse("-2*x1");
    return make_algebroid(2, 3, std::move(rho), std::move(c), "twisted-action-r3");
}

AlgebroidStructure random_small_algebroid(Rng& rng) {
    const int m = 1 + static_cast<int>(rng.index(2));
    const int r = 1 + static_cast<int>(rng.index(3));
    auto affine = [&]() {
        const int a = static_cast<int>(rng.index(static_cast<std::size_t>(m)));
        return "(" + format_g17(rng.uniform(-1.0, 1.0)) + ")+(" +
               format_g17(rng.uniform(-1.0, 1.0)) + ")*x" + std::to_string(a + 1);
    };
    std::vector<std::vector<Expr>> rho(static_cast<std::size_t>(m),
                                       std::vector<Expr>(static_cast<std::size_t>(r)));
    for (auto& row : rho)
        for (auto& e : row) e = parse(affine());
    std::vector<std::vector<std::vector<Expr>>> c(
        static_cast<std::size_t>(r),
        std::vector<std::vector<Expr>>(static_cast<std::size_t>(r),
                                       std::vector<Expr>(static_cast<std::size_t>(r), parse("0"))));
    for (int kk = 0; kk < r; ++kk)
        for (int i = 0; i < r; ++i)
            for (int j = i + 1; j < r; ++j) {
                const std::string s = affine();
                c[static_cast<std::size_t>(kk)][static_cast<std::size_t>(i)]
                 [static_cast<std::size_t>(j)] = parse(s);
                c[static_cast<std::size_t>(kk)][static_cast<std::size_t>(j)]
                 [static_cast<std::size_t>(i)] = parse("-(" + s + ")");
            }
    return make_algebroid(m, r, std::move(rho), std::move(c), "random-small");
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double w = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) w = std::max(w, std::abs(a[i] - b[i]));
    return w;
}

} // namespace

SuiteResult suite_binom() {
    SuiteResult res;
    res.name = "binomial-identities";
    res.tol = 0.0;
    std::int64_t worst = 0;
    for (int k = 1; k <= kMaxJetOrder; ++k) {
        const BinomReport rep = binom_identity_check(k);
        worst = std::max(worst, rep.worst);
        ++res.cases;
    }
    res.worst = static_cast<double>(worst);
    res.pass = worst == 0;
    res.detail = "exact integer check through k = " + std::to_string(kMaxJetOrder);
    return res;
}

SuiteResult suite_green(std::uint64_t seed) {
    SuiteResult res;
    res.name = "integration-by-parts";
    res.tol = 1e-9;
    Rng rng(seed);
    for (int k = 1; k <= 4; ++k)
        for (int inst = 0; inst < 200; ++inst) {
            const int r = 1 + inst % 3;
            SemiHolonomicBlock blk;
            blk.k = k;
            blk.xi.resize(static_cast<std::size_t>(r));
            for (auto& slab : blk.xi) {
                slab.resize(static_cast<std::size_t>(k) + 1);
                for (auto& row : slab) row = rng.vector(static_cast<std::size_t>(k) + 1, -1.0, 1.0);
            }
            std::vector<Jet<double>> ujet;
            for (int i = 0; i < r; ++i)
                ujet.push_back(Jet<double>(rng.vector(static_cast<std::size_t>(k) + 1, -1.0, 1.0)));
            res.worst = std::max(res.worst, green_identity_check(blk, ujet));
            ++res.cases;
        }
    res.pass = res.worst <= res.tol;
    res.detail = "k = 1..4, ranks 1..3, random covector blocks";
    return res;
}

SuiteResult suite_pk(std::uint64_t seed) {
    SuiteResult res;
    res.name = "holonomic-projection";
    res.tol = 1e-12;
    Rng rng(seed);
    for (int k = 1; k <= 4; ++k)
        for (int inst = 0; inst < 50; ++inst) {
            const int r = 1 + inst % 3;
            const std::size_t full = (std::size_t{1} << k) - 1;
            IteratedFiber X;
            X.k = k;
            X.comp.resize(static_cast<std::size_t>(r));
            for (auto& row : X.comp) row = rng.vector(full + 1, -1.0, 1.0);
            // Semi-holonomic covector: iterated components depend only on the
            // derivative degree.
            std::vector<std::vector<double>> phi(static_cast<std::size_t>(r));
            for (auto& row : phi) row = rng.vector(static_cast<std::size_t>(k) + 1, -1.0, 1.0);
            IteratedFiber Phi;
            Phi.k = k;
            Phi.comp.resize(static_cast<std::size_t>(r));
            for (int i = 0; i < r; ++i)
                for (std::size_t mask = 0; mask <= full; ++mask)
                    Phi.comp[static_cast<std::size_t>(i)].push_back(
                        phi[static_cast<std::size_t>(i)]
                           [static_cast<std::size_t>(std::popcount(mask))]);
            const double lhs = pairing_iterated(Phi, X);
            const double rhs = pairing_Tk(phi, P_k_project(X));
            res.worst = std::max(res.worst, std::abs(lhs - rhs));
            ++res.cases;
        }
    res.pass = res.worst <= res.tol;
    res.detail = "pairing against semi-holonomic covectors preserved";
    return res;
}

SuiteResult suite_eps_lie(std::uint64_t seed) {
    SuiteResult res;
    res.name = "lie-closed-form";
    res.tol = 1e-10;
    Rng rng(seed);
    for (const auto& A : {preset_lie_so3(), preset_lie_heis3()}) {
        const auto cval = c_eval(A, std::vector<double>{}, 0.0);
        for (int k = 1; k <= 4; ++k)
            for (int inst = 0; inst < 100; ++inst) {
                EkCovector psi;
                psi.base.k = k;
                psi.base.y.resize(static_cast<std::size_t>(A.r));
                psi.dy.resize(static_cast<std::size_t>(A.r));
                for (int i = 0; i < A.r; ++i) {
                    psi.base.y[static_cast<std::size_t>(i)] =
                        rng.vector(static_cast<std::size_t>(k), -1.0, 1.0);
                    psi.dy[static_cast<std::size_t>(i)] =
                        rng.vector(static_cast<std::size_t>(k), -1.0, 1.0);
                }
                const TkCovector tk = eps_k(A, psi);
                // zeta^{(beta)} = C(k,beta)^{-1} [ xi_{k-1-beta}
                //   + sum_s C(k-beta+s, s) (ad*_{a^{(s)}} xi_{k-beta+s}) ]
                for (int j = 0; j < A.r; ++j)
                    for (int beta = 0; beta <= k; ++beta) {
                        double zeta = 0.0;
                        if (beta <= k - 1)
                            zeta += psi.dy[static_cast<std::size_t>(j)]
                                          [static_cast<std::size_t>(k - 1 - beta)];
                        for (int s = 0; s <= beta - 1; ++s) {
                            double ad = 0.0;
                            for (int kk = 0; kk < A.r; ++kk)
                                for (int i = 0; i < A.r; ++i)
                                    ad += cval[static_cast<std::size_t>(kk)]
                                              [static_cast<std::size_t>(i)]
                                              [static_cast<std::size_t>(j)] *
                                          psi.base.y[static_cast<std::size_t>(i)]
                                                    [static_cast<std::size_t>(s)] *
                                          psi.dy[static_cast<std::size_t>(kk)]
                                                [static_cast<std::size_t>(k - beta + s)];
                            zeta += binom(k - beta + s, s) * ad;
                        }
                        zeta /= binom(k, beta);
                        res.worst = std::max(
                            res.worst, std::abs(zeta - tk.xi[static_cast<std::size_t>(j)]
                                                            [static_cast<std::size_t>(beta)]));
                    }
                ++res.cases;
            }
    }
    res.pass = res.worst <= res.tol;
    res.detail = "so3 and heis3 constants, k = 1..4";
    return res;
}

SuiteResult suite_extension_independence(std::uint64_t seed) {
    SuiteResult res;
    res.name = "extension-independence";
    res.tol = 1e-9;
    Rng rng(seed);
    const AlgebroidStructure action = poly_action_structure();
    const AlgebroidStructure twisted = poly_twisted_structure();
    for (int k = 1; k <= 3; ++k)
        for (int inst = 0; inst < 10; ++inst) {
            const AlgebroidStructure& A = (inst % 2 == 0) ? action : twisted;
            EkCovector psi;
            psi.base.k = k;
            psi.base.x = rng.vector(static_cast<std::size_t>(A.m), -1.0, 1.0);
            psi.base.y.resize(static_cast<std::size_t>(A.r));
            psi.dy.resize(static_cast<std::size_t>(A.r));
            for (int i = 0; i < A.r; ++i) {
                psi.base.y[static_cast<std::size_t>(i)] =
                    rng.vector(static_cast<std::size_t>(k), -1.0, 1.0);
                psi.dy[static_cast<std::size_t>(i)] =
                    rng.vector(static_cast<std::size_t>(k), -1.0, 1.0);
            }
            psi.dx = rng.vector(static_cast<std::size_t>(A.m), -1.0, 1.0);
            const TkCovector canonical = eps_k(A, psi);
            for (int e = 0; e < 20; ++e) {
                EkExtension ext;
                ext.P.resize(static_cast<std::size_t>(A.m));
                for (auto& row : ext.P)
                    row = rng.vector(static_cast<std::size_t>(k) - 1, -1.0, 1.0);
                const TkCovector tk = eps_k(A, psi, &ext);
                for (int i = 0; i < A.r; ++i)
                    res.worst = std::max(res.worst,
                                         sup_diff(tk.xi[static_cast<std::size_t>(i)],
                                                  canonical.xi[static_cast<std::size_t>(i)]));
                ++res.cases;
            }
        }
    res.pass = res.worst <= res.tol;
    res.detail = "20 random ambient extensions per instance, k = 1..3";
    return res;
}

SuiteResult suite_force_oracles(std::uint64_t seed) {
    SuiteResult res;
    res.name = "force-oracles";
    res.tol = 1e-7;
    Rng rng(seed);
    const auto times = sample_times(0.0, 1.0, 11);
    std::ostringstream detail;

    auto run_family = [&](const char* label, const AlgebroidStructure& A, int k,
                          ElFamily family, int instances) {
        double fam_worst = 0.0;
        for (int inst = 0; inst < instances; ++inst) {
            const Lagrangian L = random_lagrangian(rng, A, k);
            const AdmissiblePath path = safe_random_path(rng, A, 3, 0.5);
            const auto pipeline = force_samples(A, L, path, times);
            for (std::size_t n = 0; n < times.size(); ++n) {
                const auto oracle = oracle_el(A, L, path, times[n], family);
                fam_worst = std::max(fam_worst, sup_diff(pipeline[n].F, oracle));
            }
            ++res.cases;
        }
        res.worst = std::max(res.worst, fam_worst);
        detail << (detail.tellp() > 0 ? ", " : "") << label << " " << fmt3(fam_worst);
    };

    const AlgebroidStructure tangent2 = preset_tangent(2);
    for (int k = 1; k <= 3; ++k)
        run_family(("tangent k=" + std::to_string(k)).c_str(), tangent2, k, ElFamily::Tangent, 3);

    const AlgebroidStructure poly = poly_twisted_structure();
    const AlgebroidStructure so3 = preset_lie_so3();
    const AlgebroidStructure heis = preset_lie_heis3();
    run_family("algebroid k=1 (poly)", poly, 1, ElFamily::AlgebroidK1, 3);
    run_family("algebroid k=1 (so3)", so3, 1, ElFamily::AlgebroidK1, 3);
    run_family("algebroid k=2 (poly)", poly, 2, ElFamily::AlgebroidK2, 3);
    run_family("algebroid k=2 (so3)", so3, 2, ElFamily::AlgebroidK2, 3);
    for (int k = 1; k <= 3; ++k) {
        run_family(("euler-poincare k=" + std::to_string(k) + " (so3)").c_str(), so3, k,
                   ElFamily::EulerPoincare, 2);
        run_family(("euler-poincare k=" + std::to_string(k) + " (heis3)").c_str(), heis, k,
                   ElFamily::EulerPoincare, 2);
    }
    const AlgebroidStructure hamel = preset_product({preset_tangent(1), preset_lie_so3()});
    run_family("hamel k=2", hamel, 2, ElFamily::HamelK2, 3);

    res.pass = res.worst <= res.tol;
    res.detail = detail.str();
    return res;
}

SuiteResult suite_momentum_oracle(std::uint64_t seed) {
    SuiteResult res;
    res.name = "momentum-oracle";
    res.tol = 1e-7;
    Rng rng(seed);
    const AlgebroidStructure A = preset_tangent(2);
    const auto times = sample_times(0.0, 1.0, 11);
    for (int k = 2; k <= 3; ++k)
        for (int inst = 0; inst < 5; ++inst) {
            const Lagrangian L = random_lagrangian(rng, A, k);
            const AdmissiblePath path = random_path(rng, A);
            const auto pipeline = momentum_samples(A, L, path, times);
            PathEval<double> pe(A, path, {}, 0.0);
            for (std::size_t n = 0; n < times.size(); ++n) {
                const auto pt = pe.point_tjets(times[n], k, k);
                const auto psi = dL_at(A, L, pt, Jet<double>::constant(k, 0.0));
                // Ostrogradsky ladder: m^{(beta)} = sum_j (-1)^j d^j/dt^j of
                // the gradient along y^{(k-1-beta+j)}.
                for (int i = 0; i < A.r; ++i)
                    for (int beta = 0; beta <= k - 1; ++beta) {
                        double want = 0.0;
                        for (int j = 0; j <= beta; ++j)
                            want += (j % 2 == 0 ? 1.0 : -1.0) *
                                    psi.dy[static_cast<std::size_t>(i)]
                                          [static_cast<std::size_t>(k - 1 - beta + j)]
                                              .c[static_cast<std::size_t>(j)];
                        res.worst = std::max(
                            res.worst, std::abs(want - pipeline[n].m[static_cast<std::size_t>(i)]
                                                                    [static_cast<std::size_t>(beta)]));
                    }
            }
            ++res.cases;
        }
    res.pass = res.worst <= res.tol;
    res.detail = "tangent family, k = 2, 3";
    return res;
}

SuiteResult suite_variational_identity(std::uint64_t seed) {
    SuiteResult res;
    res.name = "variational-identity";
    res.tol = 1e-7;
    Rng rng(seed);

    auto run_instance = [&](const AlgebroidStructure& A, int k) {
        const Lagrangian L = random_lagrangian(rng, A, k);
        const AdmissiblePath path = safe_random_path(rng, A, 3, 0.5);
        std::vector<Expr> b;
        for (int i = 0; i < A.r; ++i) b.push_back(parse(poly_in_t(rng, 2)));
        const double t = rng.uniform(0.1, 0.9);

        const EkTangent delta = variation_apply(A, path, b, t, k);
        PathEval<double> pe(A, path, {}, 0.0);
        const EkPoint pt = pe.point(t, k);
        const auto grad = dL_at(A, L, pt, 0.0);
        double lhs = 0.0;
        for (int a = 0; a < A.m; ++a)
            lhs += grad.dx[static_cast<std::size_t>(a)] * delta.dx[static_cast<std::size_t>(a)];
        for (int i = 0; i < A.r; ++i)
            for (int al = 0; al < k; ++al)
                lhs += grad.dy[static_cast<std::size_t>(i)][static_cast<std::size_t>(al)] *
                       delta.dy[static_cast<std::size_t>(i)][static_cast<std::size_t>(al)];

        const auto F = force_components(L, pe, t);
        std::vector<std::vector<double>> mdot;
        const auto m = momentum_components(L, pe, t, &mdot);
        Env<Jet<double>> env;
        env.emplace("t", Jet<double>::variable(k, t));
        const Jet<double> jproto = Jet<double>::constant(k, 0.0);
        double rhs = 0.0;
        std::vector<std::vector<double>> bcoef(static_cast<std::size_t>(A.r));
        for (int i = 0; i < A.r; ++i) {
            const Jet<double> bj = eval(b[static_cast<std::size_t>(i)], env, jproto);
            rhs += F[static_cast<std::size_t>(i)] * bj.c[0];
            bcoef[static_cast<std::size_t>(i)] = bj.c;
        }
        rhs += momenta_pairing(mdot, bcoef, 0) + momenta_pairing(m, bcoef, 1);
        res.worst = std::max(res.worst, std::abs(lhs - rhs));
        ++res.cases;
    };

    const AlgebroidStructure action = poly_action_structure();
    const AlgebroidStructure twisted = poly_twisted_structure();
    for (int inst = 0; inst < 50; ++inst)
        run_instance(inst % 2 == 0 ? action : twisted, 1 + inst % 2);
    const AlgebroidStructure so3 = preset_lie_so3();
    for (int inst = 0; inst < 50; ++inst) run_instance(so3, 1 + inst % 3);

    res.pass = res.worst <= res.tol;
    res.detail = "general structure k <= 2, Lie constants k <= 3";
    return res;
}

SuiteResult suite_solver_benchmark() {
    SuiteResult res;
    res.name = "solver-benchmark";
    res.tol = 1e-8; // coefficient accuracy; node residual tolerance is 1e-6

    CollocationProblem p;
    p.A = preset_tangent(1);
    p.L.k = 2;
    p.L.expr = parse("y1_1^2/2");
    p.x0 = {0.0};
    p.t0 = 0.0;
    p.t1 = 1.0;
    p.degree = 3;
    p.boundary = {
        {BoundaryEntry::Kind::Fiber, 0, 0, false, 0.0}, // xdot(0) = 0
        {BoundaryEntry::Kind::Fiber, 0, 0, true, 0.0},  // xdot(1) = 0
        {BoundaryEntry::Kind::Base, 0, 0, true, 1.0},   // x(1) = 1
    };

    const SolveResult sol = solve(p);
    // x = 3t^2 - 2t^3 interpolates the data and satisfies the stationarity
    // condition x'''' = 0, so y = xdot = 6t - 6t^2.
    const std::vector<double> want = {0.0, 6.0, -6.0, 0.0};
    double cerr = 0.0;
    for (std::size_t j = 0; j < want.size(); ++j)
        cerr = std::max(cerr, std::abs(sol.coeffs[0][j] - want[j]));

    CollocationProblem p2 = p;
    p2.nodes = 2 * (p.degree + 1) * 2;
    const SolveResult sol2 = solve(p2);
    double refine = 0.0;
    for (std::size_t j = 0; j < want.size(); ++j)
        refine = std::max(refine, std::abs(sol2.coeffs[0][j] - sol.coeffs[0][j]));

    res.worst = cerr;
    res.cases = 2;
    res.pass = sol.converged && sol.force_sup <= 1e-6 && cerr <= 1e-8 && refine <= 1e-6;
    res.detail = "coeff err " + fmt3(cerr) + ", node residual " + fmt3(sol.force_sup) +
                 ", refinement delta " + fmt3(refine) + ", " +
                 std::to_string(sol.iterations) + " iterations";
    return res;
}

SuiteResult suite_k1_degenerate(std::uint64_t seed) {
    SuiteResult res;
    res.name = "first-order-degeneracy";
    res.tol = 1e-12;
    Rng rng(seed);
    for (int inst = 0; inst < 100; ++inst) {
        const AlgebroidStructure A = random_small_algebroid(rng);

        // (a) the dual map: first-order pipeline vs the direct implementation
        TStarEVector w;
        w.x = rng.vector(static_cast<std::size_t>(A.m), -1.0, 1.0);
        w.y = rng.vector(static_cast<std::size_t>(A.r), -1.0, 1.0);
        w.p = rng.vector(static_cast<std::size_t>(A.m), -1.0, 1.0);
        w.piv = rng.vector(static_cast<std::size_t>(A.r), -1.0, 1.0);
        const TStarEImage direct = epsilon_apply(A, w);
        EkCovector psi;
        psi.base.k = 1;
        psi.base.x = w.x;
        psi.base.y.resize(static_cast<std::size_t>(A.r));
        for (int i = 0; i < A.r; ++i)
            psi.base.y[static_cast<std::size_t>(i)] = {w.y[static_cast<std::size_t>(i)]};
        psi.dx = w.p;
        psi.dy.resize(static_cast<std::size_t>(A.r));
        for (int i = 0; i < A.r; ++i)
            psi.dy[static_cast<std::size_t>(i)] = {w.piv[static_cast<std::size_t>(i)]};
        const TkCovector tk = eps_k(A, psi);
        for (int i = 0; i < A.r; ++i) {
            res.worst = std::max(res.worst, std::abs(tk.xi[static_cast<std::size_t>(i)][0] -
                                                     direct.xi[static_cast<std::size_t>(i)]));
            res.worst = std::max(res.worst, std::abs(tk.xi[static_cast<std::size_t>(i)][1] -
                                                     direct.xidot[static_cast<std::size_t>(i)]));
        }
        for (int a = 0; a < A.m; ++a)
            res.worst = std::max(res.worst, std::abs(tk.xjet[static_cast<std::size_t>(a)].c[1] -
                                                     direct.xdot[static_cast<std::size_t>(a)]));

        // (b) force and (c) momentum along a path
        const Lagrangian L = random_lagrangian(rng, A, 1);
        const AdmissiblePath path = random_path(rng, A, 2);
        const double t = rng.uniform(0.1, 0.9);
        PathEval<double> pe(A, path, {}, 0.0);
        const auto F = force_components(L, pe, t);
        const auto oracle = oracle_el(A, L, path, t, ElFamily::AlgebroidK1);
        res.worst = std::max(res.worst, sup_diff(F, oracle));

        const auto mom = momentum_components(L, pe, t);
        const auto grad = dL_at(A, L, pe.point(t, 1), 0.0);
        for (int i = 0; i < A.r; ++i)
            res.worst = std::max(res.worst, std::abs(mom[static_cast<std::size_t>(i)][0] -
                                                     grad.dy[static_cast<std::size_t>(i)][0]));
        ++res.cases;
    }
    res.pass = res.worst <= res.tol;
    res.detail = "dual map, force, momentum vs first-order implementations";
    return res;
}

std::vector<SuiteResult> run_all_suites(std::uint64_t seed) {
    return {
        suite_binom(),
        suite_green(seed + 1),
        suite_pk(seed + 2),
        suite_eps_lie(seed + 3),
        suite_extension_independence(seed + 4),
        suite_force_oracles(seed + 5),
        suite_momentum_oracle(seed + 6),
        suite_variational_identity(seed + 7),
        suite_solver_benchmark(),
        suite_k1_degenerate(seed + 8),
    };
}

} // namespace alvc
