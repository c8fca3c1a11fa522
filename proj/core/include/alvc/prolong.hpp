// Higher-order prolongation kernels: the embedding of a k-th order element
// into jets of the base, the graded rescaling of covectors, the dual map
// eps_k from covectors on E^k to k-jet covectors, the binomial-average
// projection from iterated to holonomic components, and the two
// integration-by-parts kernels (upsilon for the force, momenta_map for the
// momentum) together with their exact combinatorial support.
//
// Everything is generic over the scalar ring S: mechanics instantiates these
// with S = Jet<double> to move whole time-jets through the maps, and the
// solver goes one level deeper for sensitivities.

#pragma once

#include "alvc/algebroid.hpp"
#include "alvc/jet.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace alvc {

// A point of the k-th order space: base x, graded fiber components
// y[i][alpha] = y^{i,(alpha)} for alpha = 0..k-1.
template <class S>
struct EkPointT {
    int k = 1;
    std::vector<S> x;
    std::vector<std::vector<S>> y;
};
using EkPoint = EkPointT<double>;

// A covector at an EkPoint: components along dx^a and dy^{i,(alpha)}.
template <class S>
struct EkCovectorT {
    EkPointT<S> base;
    std::vector<S> dx;
    std::vector<std::vector<S>> dy;
};
using EkCovector = EkCovectorT<double>;

// A k-jet covector: base jet x^{a,(0..k)} and fiber components xi[i][beta].
template <class S>
struct TkCovectorT {
    int k = 1;
    std::vector<Jet<S>> xjet;
    std::vector<std::vector<S>> xi;
};
using TkCovector = TkCovectorT<double>;

// Order-K jet of a curve of covectors on E: per-coordinate jets of
// (x, xi, xdot, xidot).
template <class S>
struct MixedCovectorJetT {
    int order = 0;
    std::vector<Jet<S>> x, xi, xdot, xidot;
};
using MixedCovectorJet = MixedCovectorJetT<double>;

// Order-k block of covector jets over a holonomic base:
// xi[i][alpha][beta] = alpha-th time derivative of the beta-th fiber
// component; basejet holds the order-2k base jets.
template <class S>
struct SemiHolonomicBlockT {
    int k = 1;
    std::vector<Jet<S>> basejet;
    std::vector<std::vector<std::vector<S>>> xi;
};
using SemiHolonomicBlock = SemiHolonomicBlockT<double>;

// Fiber components of an element of the k-fold iterated tangent of E,
// indexed by subsets of the k derivative slots: bit t of `mask` set means
// the component carries a derivative in slot t.  `base`, when non-empty, is
// indexed the same way and must be holonomic (depend on the popcount only).
template <class S>
struct IteratedFiberT {
    int k = 1;
    std::vector<std::vector<S>> comp; // comp[i][mask], mask < 2^k
    std::vector<std::vector<S>> base; // base[a][mask], optional
};
using IteratedFiber = IteratedFiberT<double>;

namespace detail {

template <class S>
S proto_of(const EkPointT<S>& e) {
    if (!e.y.empty() && !e.y.front().empty()) return ring_constant_like(e.y[0][0], 0.0);
    if (!e.x.empty()) return ring_constant_like(e.x[0], 0.0);
    throw std::invalid_argument("empty point");
}

} // namespace detail

// ---------------------------------------------------------------------------
// embed_Ek: the unique base jet determined by the admissibility recurrence
// x^{a,(beta+1)} = [rho(x(t)) y(t)]^{(beta)}.  Returns m jets of order e.k.
// ---------------------------------------------------------------------------

template <class S>
std::vector<Jet<S>> embed_Ek(const AlgebroidStructure& A, const EkPointT<S>& e) {
    const int k = e.k;
    if (k < 1) throw std::invalid_argument("embed_Ek: k >= 1 required");
    if (static_cast<int>(e.x.size()) != A.m || static_cast<int>(e.y.size()) != A.r)
        throw std::invalid_argument("embed_Ek: point shape mismatch");
    if (A.m == 0) return {};
    const S proto = detail::proto_of(e);

    std::vector<Jet<S>> yj;
    yj.reserve(static_cast<std::size_t>(A.r));
    for (int i = 0; i < A.r; ++i) {
        if (static_cast<int>(e.y[static_cast<std::size_t>(i)].size()) != k)
            throw std::invalid_argument("embed_Ek: fiber must carry orders 0..k-1");
        yj.push_back(Jet<S>(e.y[static_cast<std::size_t>(i)]));
    }

    std::vector<Jet<S>> xj;
    xj.reserve(static_cast<std::size_t>(A.m));
    for (int a = 0; a < A.m; ++a) {
        Jet<S> j = Jet<S>::constant(k, proto);
        j.c[0] = e.x[static_cast<std::size_t>(a)];
        xj.push_back(std::move(j));
    }

    const Jet<S> jproto = Jet<S>::constant(k - 1, proto);
    for (int beta = 0; beta < k; ++beta) {
        // Coefficient beta of rho(x)y only involves x-coefficients <= beta,
        // which are already final at this step.
        std::vector<Jet<S>> xt;
        xt.reserve(static_cast<std::size_t>(A.m));
        for (int a = 0; a < A.m; ++a) xt.push_back(jet_truncate(xj[static_cast<std::size_t>(a)], k - 1));
        const auto f = anchor_apply<Jet<S>>(A, xt, yj, jproto);
        for (int a = 0; a < A.m; ++a)
            xj[static_cast<std::size_t>(a)].c[static_cast<std::size_t>(beta) + 1] =
                f[static_cast<std::size_t>(a)].c[static_cast<std::size_t>(beta)];
    }
    return xj;
}

// ---------------------------------------------------------------------------
// eps_kM_rescale: graded covector rescaling p^{(alpha)} = C(K,alpha)^{-1} p_(K-alpha).
// ---------------------------------------------------------------------------

template <class S>
std::vector<S> eps_kM_rescale(const std::vector<S>& p, int K) {
    if (static_cast<int>(p.size()) != K + 1)
        throw std::invalid_argument("eps_kM_rescale: need K+1 components");
    std::vector<S> out;
    out.reserve(p.size());
    for (int al = 0; al <= K; ++al)
        out.push_back(p[static_cast<std::size_t>(K - al)] * (1.0 / binom(K, al)));
    return out;
}

// ---------------------------------------------------------------------------
// Pairings
// ---------------------------------------------------------------------------

// <xi, v> = sum_i sum_alpha C(k,alpha) xi[i][alpha] v[i][k-alpha]
template <class S>
S pairing_Tk(const std::vector<std::vector<S>>& xi, const std::vector<std::vector<S>>& v) {
    if (xi.size() != v.size() || xi.empty())
        throw std::invalid_argument("pairing_Tk: rank mismatch");
    const int k = static_cast<int>(xi.front().size()) - 1;
    S acc = ring_constant_like(xi[0][0], 0.0);
    for (std::size_t i = 0; i < xi.size(); ++i) {
        if (xi[i].size() != static_cast<std::size_t>(k) + 1 || v[i].size() != xi[i].size())
            throw std::invalid_argument("pairing_Tk: component count mismatch");
        for (int al = 0; al <= k; ++al)
            acc = acc + binom(k, al) * (xi[i][static_cast<std::size_t>(al)] *
                                        v[i][static_cast<std::size_t>(k - al)]);
    }
    return acc;
}

// <xi, v> = sum_i sum_mask xi[i][mask] v[i][~mask]
template <class S>
S pairing_iterated(const IteratedFiberT<S>& xi, const IteratedFiberT<S>& v) {
    if (xi.k != v.k || xi.comp.size() != v.comp.size() || xi.comp.empty())
        throw std::invalid_argument("pairing_iterated: shape mismatch");
    const std::size_t full = (std::size_t{1} << xi.k) - 1;
    S acc = ring_constant_like(xi.comp[0][0], 0.0);
    for (std::size_t i = 0; i < xi.comp.size(); ++i)
        for (std::size_t mask = 0; mask <= full; ++mask)
            acc = acc + xi.comp[i][mask] * v.comp[i][full ^ mask];
    return acc;
}

// ---------------------------------------------------------------------------
// P_k: binomial average of iterated components of equal total degree.
// ---------------------------------------------------------------------------

template <class S>
std::vector<std::vector<S>> P_k_project(const IteratedFiberT<S>& X, double base_tol = 1e-9) {
    const int k = X.k;
    if (X.comp.empty()) throw std::invalid_argument("P_k_project: empty fiber");
    const std::size_t full = (std::size_t{1} << k) - 1;
    if (!X.base.empty()) {
        for (const auto& row : X.base)
            for (std::size_t mask = 0; mask <= full; ++mask) {
                // holonomic base: the component may depend on the degree only
                const std::size_t rep =
                    (std::size_t{1} << static_cast<unsigned>(std::popcount(mask))) - 1;
                if (std::abs(leading_value(row[mask]) - leading_value(row[rep])) > base_tol)
                    throw std::invalid_argument("P_k_project: base is not holonomic");
            }
    }
    std::vector<std::vector<S>> out(X.comp.size());
    for (std::size_t i = 0; i < X.comp.size(); ++i) {
        out[i].assign(static_cast<std::size_t>(k) + 1, ring_constant_like(X.comp[0][0], 0.0));
        for (std::size_t mask = 0; mask <= full; ++mask) {
            const int deg = std::popcount(mask);
            out[i][static_cast<std::size_t>(deg)] =
                out[i][static_cast<std::size_t>(deg)] + X.comp[i][mask];
        }
        for (int al = 0; al <= k; ++al)
            out[i][static_cast<std::size_t>(al)] =
                out[i][static_cast<std::size_t>(al)] * (1.0 / binom(k, al));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Integration-by-parts kernels
// ---------------------------------------------------------------------------

// F_i = sum_alpha (-1)^alpha C(k,alpha) xi[i][alpha][k-alpha]
template <class S>
std::vector<S> upsilon(const SemiHolonomicBlockT<S>& Phi) {
    const int k = Phi.k;
    std::vector<S> out;
    out.reserve(Phi.xi.size());
    for (const auto& comp : Phi.xi) {
        S acc = ring_constant_like(comp[0][0], 0.0);
        for (int al = 0; al <= k; ++al) {
            const double w = (al % 2 == 0 ? 1.0 : -1.0) * binom(k, al);
            acc = acc + w * comp[static_cast<std::size_t>(al)][static_cast<std::size_t>(k - al)];
        }
        out.push_back(acc);
    }
    return out;
}

// m^{(beta)} = sum_{a+b=beta} (-1)^a C(kp+1,b) xi[i][a+shift][b], beta = 0..kp.
// With kp = Phi.k and shift = 0 this is the momenta kernel at full order;
// callers use kp = Phi.k - 1 for the mechanical momentum and shift = 1 for
// its time derivative.
template <class S>
std::vector<std::vector<S>> momenta_map_at(const SemiHolonomicBlockT<S>& Phi, int kp, int shift) {
    if (kp + shift > Phi.k)
        throw std::invalid_argument("momenta_map_at: order exceeds block depth");
    std::vector<std::vector<S>> out(Phi.xi.size());
    for (std::size_t i = 0; i < Phi.xi.size(); ++i) {
        out[i].reserve(static_cast<std::size_t>(kp) + 1);
        for (int beta = 0; beta <= kp; ++beta) {
            S acc = ring_constant_like(Phi.xi[0][0][0], 0.0);
            for (int a = 0; a <= beta; ++a) {
                const int b = beta - a;
                const double w = (a % 2 == 0 ? 1.0 : -1.0) * binom(kp + 1, b);
                acc = acc + w * Phi.xi[i][static_cast<std::size_t>(a + shift)]
                                       [static_cast<std::size_t>(b)];
            }
            out[i].push_back(acc);
        }
    }
    return out;
}

template <class S>
std::vector<std::vector<S>> momenta_map(const SemiHolonomicBlockT<S>& Phi) {
    return momenta_map_at(Phi, Phi.k, 0);
}

template <class S>
SemiHolonomicBlockT<S> block_truncate(const SemiHolonomicBlockT<S>& Phi, int kp) {
    if (kp > Phi.k) throw std::invalid_argument("block_truncate: order grows");
    SemiHolonomicBlockT<S> out;
    out.k = kp;
    out.basejet.reserve(Phi.basejet.size());
    for (const auto& j : Phi.basejet) out.basejet.push_back(jet_truncate(j, 2 * kp));
    out.xi.resize(Phi.xi.size());
    for (std::size_t i = 0; i < Phi.xi.size(); ++i) {
        out.xi[i].resize(static_cast<std::size_t>(kp) + 1);
        for (int a = 0; a <= kp; ++a)
            out.xi[i][static_cast<std::size_t>(a)].assign(
                Phi.xi[i][static_cast<std::size_t>(a)].begin(),
                Phi.xi[i][static_cast<std::size_t>(a)].begin() + kp + 1);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Exact combinatorial identities behind upsilon/momenta_map.
// ---------------------------------------------------------------------------

struct BinomReport {
    bool pass = false;
    std::int64_t worst = 0; // largest absolute deviation encountered
    int k = 0;
};

inline BinomReport binom_identity_check(int k) {
    if (k < 1 || k > kMaxJetOrder)
        throw std::invalid_argument("binom_identity_check: k out of range");
    BinomReport rep;
    rep.k = k;
    std::int64_t worst = 0;
    for (int a = 0; a <= k - 1; ++a) {
        std::int64_t s = 0;
        for (int j = a; j <= k; ++j) {
            const std::int64_t sign = (j % 2 == 0) ? 1 : -1;
            s += sign * binom_i(j, a) * binom_i(k, j);
        }
        worst = std::max(worst, std::abs(s));
    }
    for (int a = 0; a + 0 <= k; ++a)
        for (int b = 0; a + b <= k; ++b) {
            std::int64_t s = 0;
            for (int j = a; j <= k - b; ++j) {
                const std::int64_t sign = (j % 2 == 0) ? 1 : -1;
                s += sign * binom_i(j, a) * binom_i(k - j, b) * binom_i(k + 1, j + 1);
            }
            const std::int64_t want = ((a % 2 == 0) ? 1 : -1) * binom_i(k + 1, b);
            worst = std::max(worst, std::abs(s - want));
        }
    rep.worst = worst;
    rep.pass = worst == 0;
    return rep;
}

// ---------------------------------------------------------------------------
// eps_k: covector on E^k  ->  k-jet covector, via
//   (1) extension to the ambient jet space,
//   (2) graded rescaling on both blocks,
//   (3) the order-1 dual map applied to jets, and
//   (4) the averaged projection back to holonomic components.
// ---------------------------------------------------------------------------

// zeta_i^{(beta)} = C(k,beta)^{-1} [ C(k-1,beta) xi_i^{(beta)}
//                                  + C(k-1,beta-1) xidot_i^{(beta-1)} ]
template <class S>
std::vector<std::vector<S>> iota_star_project(const std::vector<Jet<S>>& xi,
                                              const std::vector<Jet<S>>& xidot, int k) {
    std::vector<std::vector<S>> out(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i) {
        out[i].reserve(static_cast<std::size_t>(k) + 1);
        for (int beta = 0; beta <= k; ++beta) {
            S acc = ring_constant_like(xi[i].c[0], 0.0);
            if (beta <= k - 1)
                acc = acc + binom(k - 1, beta) * xi[i].c[static_cast<std::size_t>(beta)];
            if (beta >= 1)
                acc = acc + binom(k - 1, beta - 1) * xidot[i].c[static_cast<std::size_t>(beta) - 1];
            out[i].push_back(acc * (1.0 / binom(k, beta)));
        }
    }
    return out;
}

// Optional extension data for step (1): values along the ambient base-jet
// directions x^{a,(beta)}, beta = 1..k-1 (the canonical choice is zero).
template <class S>
struct EkExtensionT {
    std::vector<std::vector<S>> P; // P[a][beta-1]
};
using EkExtension = EkExtensionT<double>;

struct HolonomyError : std::runtime_error {
    explicit HolonomyError(const std::string& what) : std::runtime_error(what) {}
};

template <class S>
TkCovectorT<S> eps_k(const AlgebroidStructure& A, const EkCovectorT<S>& psi,
                     const EkExtensionT<S>* extension = nullptr, double holonomy_tol = 1e-6,
                     MixedCovectorJetT<S>* mixed_out = nullptr) {
    const int k = psi.base.k;
    const int K = k - 1;
    const S proto = detail::proto_of(psi.base);

    // Base jets of order k; their truncations feed the order-1 map.
    const std::vector<Jet<S>> xfull = embed_Ek(A, psi.base);

    // Step (1): covector components on the ambient space.  The values along
    // x^{a,(beta>=1)} are zero canonically or given by `extension`; the
    // remaining components then follow from the pullback equations, whose
    // correction terms need the partials of the embedding coefficients.
    std::vector<std::vector<S>> Pext(static_cast<std::size_t>(A.m));
    bool have_ext = false;
    if (extension != nullptr && K >= 1) {
        if (static_cast<int>(extension->P.size()) != A.m)
            throw std::invalid_argument("eps_k: extension shape mismatch");
        for (int a = 0; a < A.m; ++a) {
            if (static_cast<int>(extension->P[static_cast<std::size_t>(a)].size()) != K)
                throw std::invalid_argument("eps_k: extension shape mismatch");
            for (const auto& v : extension->P[static_cast<std::size_t>(a)])
                if (leading_value(v) != 0.0) have_ext = true;
        }
        Pext = extension->P;
    } else {
        for (auto& row : Pext) row.assign(static_cast<std::size_t>(std::max(K, 0)), proto);
    }

    std::vector<S> P0 = psi.dx;                    // components along dx^a
    std::vector<std::vector<S>> Pi = psi.dy;       // components along dy^{i,(alpha)}
    if (have_ext) {
        // d phi^{b,beta} / d(coordinate) via one order-1 seed per coordinate.
        using R1 = Jet<S>;
        auto embed_seeded = [&](int seed_a, int seed_i, int seed_alpha) {
            EkPointT<R1> pe;
            pe.k = k - 1;
            pe.x.reserve(static_cast<std::size_t>(A.m));
            for (int a = 0; a < A.m; ++a) {
                R1 v = R1::constant(1, psi.base.x[static_cast<std::size_t>(a)]);
                if (a == seed_a) v.c[1] = ring_constant_like(proto, 1.0);
                pe.x.push_back(std::move(v));
            }
            pe.y.resize(static_cast<std::size_t>(A.r));
            for (int i = 0; i < A.r; ++i)
                for (int al = 0; al <= k - 2; ++al) {
                    R1 v = R1::constant(1, psi.base.y[static_cast<std::size_t>(i)]
                                               [static_cast<std::size_t>(al)]);
                    if (i == seed_i && al == seed_alpha) v.c[1] = ring_constant_like(proto, 1.0);
                    pe.y[static_cast<std::size_t>(i)].push_back(std::move(v));
                }
            return embed_Ek(A, pe); // m jets (order k-1) over R1
        };
        auto correct = [&](S& target, int seed_a, int seed_i, int seed_alpha) {
            const auto dphi = embed_seeded(seed_a, seed_i, seed_alpha);
            for (int b = 0; b < A.m; ++b)
                for (int beta = 1; beta <= K; ++beta)
                    target = target - Pext[static_cast<std::size_t>(b)]
                                          [static_cast<std::size_t>(beta) - 1] *
                                          dphi[static_cast<std::size_t>(b)]
                                              .c[static_cast<std::size_t>(beta)]
                                              .c[1];
        };
        for (int a = 0; a < A.m; ++a) correct(P0[static_cast<std::size_t>(a)], a, -1, -1);
        for (int i = 0; i < A.r; ++i)
            for (int al = 0; al < k; ++al)
                if (al <= k - 2)
                    correct(Pi[static_cast<std::size_t>(i)][static_cast<std::size_t>(al)], -1, i, al);
    }

    // Step (2): graded rescaling of the two covector blocks into jets of the
    // momentum-type coordinates.
    std::vector<Jet<S>> pjet, pijet;
    pjet.reserve(static_cast<std::size_t>(A.m));
    for (int a = 0; a < A.m; ++a) {
        std::vector<S> comps;
        comps.reserve(static_cast<std::size_t>(K) + 1);
        comps.push_back(P0[static_cast<std::size_t>(a)]);
        for (int beta = 1; beta <= K; ++beta)
            comps.push_back(Pext[static_cast<std::size_t>(a)][static_cast<std::size_t>(beta) - 1]);
        pjet.push_back(Jet<S>(eps_kM_rescale(comps, K)));
    }
    pijet.reserve(static_cast<std::size_t>(A.r));
    for (int i = 0; i < A.r; ++i)
        pijet.push_back(Jet<S>(eps_kM_rescale(Pi[static_cast<std::size_t>(i)], K)));

    // Step (3): the order-1 dual map applied to order-K jets.
    using R = Jet<S>;
    const R rproto = R::constant(K, proto);
    std::vector<R> xt, yt;
    xt.reserve(static_cast<std::size_t>(A.m));
    for (int a = 0; a < A.m; ++a) xt.push_back(jet_truncate(xfull[static_cast<std::size_t>(a)], K));
    yt.reserve(static_cast<std::size_t>(A.r));
    for (int i = 0; i < A.r; ++i) yt.push_back(Jet<S>(psi.base.y[static_cast<std::size_t>(i)]));
    const EpsilonValue<R> ev = epsilon_generic<R>(A, xt, yt, pjet, pijet, rproto);

    // Step (4): semi-holonomy diagnostic, then the averaged projection.
    for (int a = 0; a < A.m; ++a)
        for (int beta = 0; beta + 1 <= K; ++beta) {
            const double want = leading_value(xfull[static_cast<std::size_t>(a)]
                                                  .c[static_cast<std::size_t>(beta) + 1]);
            const double got = leading_value(ev.xdot[static_cast<std::size_t>(a)]
                                                 .c[static_cast<std::size_t>(beta)]);
            if (std::abs(got - want) > holonomy_tol * (1.0 + std::abs(want)))
                throw HolonomyError("eps_k: base jet lost semi-holonomicity (component " +
                                    std::to_string(a) + ", order " + std::to_string(beta) + ")");
        }

    if (mixed_out != nullptr) {
        mixed_out->order = K;
        mixed_out->x = ev.x;
        mixed_out->xi = ev.xi;
        mixed_out->xdot = ev.xdot;
        mixed_out->xidot = ev.xidot;
    }

    TkCovectorT<S> out;
    out.k = k;
    out.xjet = xfull;
    out.xi = iota_star_project(ev.xi, ev.xidot, k);
    return out;
}

// ---------------------------------------------------------------------------
// The momenta block pairs with jets of sections in the dual-basis ladder
// convention, without binomial weights:
//     <m, j^{k-1} u> = sum_i sum_beta m[i][beta] * u_i^{(k-1-beta+shift)}.
// shift = 1 pairs against the differentiated jet, which is what the product
// rule needs when forming d/dt of the pairing.
// ---------------------------------------------------------------------------

inline double momenta_pairing(const std::vector<std::vector<double>>& m,
                              const std::vector<std::vector<double>>& u, int shift = 0) {
    if (m.size() != u.size()) throw std::invalid_argument("momenta_pairing: rank mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const std::size_t kp = m[i].size(); // k entries: beta = 0..k-1
        for (std::size_t beta = 0; beta < kp; ++beta) {
            const std::size_t want = kp - 1 - beta + static_cast<std::size_t>(shift);
            if (want >= u[i].size())
                throw std::invalid_argument("momenta_pairing: section jet order too low");
            acc += m[i][beta] * u[i][want];
        }
    }
    return acc;
}

// ---------------------------------------------------------------------------
// green_identity_check: |<Phi^{(0,.)}, j^k u> - <Upsilon(Phi), u>
//                        - d/dt <mu(Phi), j^{k-1} u>|
// with d/dt expanded by the product rule; the differentiated momenta come
// from the alpha-shifted read of the block.
// ---------------------------------------------------------------------------

inline double green_identity_check(const SemiHolonomicBlock& Phi,
                                   const std::vector<Jet<double>>& ujet) {
    const int k = Phi.k;
    const std::size_t r = Phi.xi.size();
    if (ujet.size() != r) throw std::invalid_argument("green_identity_check: rank mismatch");
    for (const auto& u : ujet)
        if (u.order() < k)
            throw std::invalid_argument("green_identity_check: section jet order too low");

    double lhs = 0.0;
    for (std::size_t i = 0; i < r; ++i)
        for (int b = 0; b <= k; ++b)
            lhs += binom(k, b) * Phi.xi[i][0][static_cast<std::size_t>(b)] *
                   ujet[i].c[static_cast<std::size_t>(k - b)];

    const auto ups = upsilon(Phi);
    double rhs = 0.0;
    for (std::size_t i = 0; i < r; ++i) rhs += ups[i] * ujet[i].c[0];

    const auto m = momenta_map_at(Phi, k - 1, 0);
    const auto mdot = momenta_map_at(Phi, k - 1, 1);
    std::vector<std::vector<double>> ucoef(r);
    for (std::size_t i = 0; i < r; ++i) ucoef[i] = ujet[i].c;
    rhs += momenta_pairing(mdot, ucoef, 0) + momenta_pairing(m, ucoef, 1);

    return std::abs(lhs - rhs);
}

} // namespace alvc
