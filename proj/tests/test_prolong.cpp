#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "alvc/problem.hpp"
#include "alvc/prolong.hpp"
#include "alvc/util.hpp"

#include "support/structures.hpp"

#include <bit>
#include <cmath>

using namespace alvc;
using testfix::action_structure;
using testfix::zero_c;

namespace {

SemiHolonomicBlock random_block(Rng& rng, int k, int r) {
    SemiHolonomicBlock Phi;
    Phi.k = k;
    Phi.xi.resize(static_cast<std::size_t>(r));
    for (auto& comp : Phi.xi) {
        comp.resize(static_cast<std::size_t>(k) + 1);
        for (auto& row : comp) row = rng.vector(static_cast<std::size_t>(k) + 1, -1.0, 1.0);
    }
    return Phi;
}

} // namespace

TEST_CASE("admissible base jets from the anchor recurrence") {
    SUBCASE("identity anchor copies fiber derivatives up one slot") {
        const auto A = preset_tangent(1);
        EkPoint e;
        e.k = 2;
        e.x = {0.5};
        e.y = {{3.0, 4.0}};
        const auto xj = embed_Ek(A, e);
        REQUIRE(xj.size() == 1);
        CHECK(xj[0].c == std::vector<double>{0.5, 3.0, 4.0});
    }
    SUBCASE("base-dependent anchor applies the product rule") {
        // xdot = x*y: at x=2, y=(3,4) the second derivative is 6*3 + 2*4 = 26
        auto A = make_algebroid(1, 1, {{parse("x1")}}, zero_c(1), "scaling");
        EkPoint e;
        e.k = 2;
        e.x = {2.0};
        e.y = {{3.0, 4.0}};
        const auto xj = embed_Ek(A, e);
        CHECK(xj[0].c == std::vector<double>{2.0, 6.0, 26.0});
    }
    SUBCASE("shape validation") {
        const auto A = preset_tangent(1);
        EkPoint e;
        e.k = 2;
        e.x = {0.0};
        e.y = {{1.0}}; // needs orders 0..1
        CHECK_THROWS_AS(embed_Ek(A, e), std::invalid_argument);
    }
}

TEST_CASE("graded covector rescaling reverses and divides by binomials") {
    const std::vector<double> p = {3.0, 4.0, 5.0};
    const auto out = eps_kM_rescale(p, 2);
    CHECK(out == std::vector<double>{5.0, 2.0, 3.0});
    CHECK_THROWS_AS(eps_kM_rescale(p, 3), std::invalid_argument);
}

TEST_CASE("holonomic projection averages iterated components by degree") {
    IteratedFiber X;
    X.k = 2;
    X.comp = {{1.0, 2.0, 3.0, 4.0}};
    const auto out = P_k_project(X);
    REQUIRE(out.size() == 1);
    CHECK(out[0] == std::vector<double>{1.0, 2.5, 4.0});

    SUBCASE("already-holonomic input is returned unchanged") {
        IteratedFiber H;
        H.k = 3;
        H.comp = {std::vector<double>(8, 0.0)};
        const double by_degree[4] = {1.5, -0.25, 0.75, 2.0};
        for (std::size_t mask = 0; mask < 8; ++mask)
            H.comp[0][mask] = by_degree[std::popcount(mask)];
        const auto h = P_k_project(H);
        for (int d = 0; d <= 3; ++d)
            CHECK(h[0][static_cast<std::size_t>(d)] ==
                  doctest::Approx(by_degree[d]).epsilon(1e-15).scale(1.0));
    }
    SUBCASE("non-holonomic base data is rejected") {
        IteratedFiber B = X;
        B.base = {{0.0, 0.1, 0.5, 0.2}}; // two degree-1 slots disagree
        CHECK_THROWS_AS(P_k_project(B), std::invalid_argument);
    }
}

TEST_CASE("iterated pairing contracts complementary derivative slots") {
    IteratedFiber xi, v;
    xi.k = v.k = 2;
    xi.comp = {{1.0, 2.0, 3.0, 4.0}};
    v.comp = {{10.0, 20.0, 30.0, 40.0}};
    CHECK(pairing_iterated(xi, v) == 200.0);
}

TEST_CASE("force kernel: alternating binomial contraction of the block") {
    SemiHolonomicBlock Phi;
    Phi.k = 1;
    Phi.xi = {{{7.0, 3.0}, {1.0, 9.0}}};
    const auto F = upsilon(Phi);
    REQUIRE(F.size() == 1);
    CHECK(F[0] == 2.0); // xi[0][1] - xi[1][0] = 3 - 1
}

TEST_CASE("momentum kernel and the ladder pairing it feeds") {
    SUBCASE("first-order momentum is the plain fiber component") {
        SemiHolonomicBlock Phi;
        Phi.k = 1;
        Phi.xi = {{{7.0, 3.0}, {1.0, 9.0}}};
        const auto m = momenta_map_at(Phi, 0, 0);
        CHECK(m[0] == std::vector<double>{7.0});
        const auto mdot = momenta_map_at(Phi, 0, 1);
        CHECK(mdot[0] == std::vector<double>{1.0});
        CHECK_THROWS_AS(momenta_map_at(Phi, 1, 1), std::invalid_argument);
    }
    SUBCASE("ladder pairing uses mirrored jet orders, no weights") {
        const std::vector<std::vector<double>> m = {{2.0, 3.0}};
        const std::vector<std::vector<double>> u = {{5.0, 7.0, 11.0}};
        CHECK(momenta_pairing(m, u) == 29.0);     // 2*u' + 3*u
        CHECK(momenta_pairing(m, u, 1) == 43.0);  // 2*u'' + 3*u'
        CHECK_THROWS_AS(momenta_pairing(m, {{1.0}}, 1), std::invalid_argument);
        CHECK_THROWS_AS(momenta_pairing(m, {}), std::invalid_argument);
    }
}

TEST_CASE("alternating-sum identities behind the kernels are exact in int64") {
    for (int k = 1; k <= kMaxJetOrder; ++k) {
        const auto rep = binom_identity_check(k);
        CHECK(rep.pass);
        CHECK(rep.worst == 0);
    }
    CHECK_THROWS_AS(binom_identity_check(0), std::invalid_argument);
    CHECK_THROWS_AS(binom_identity_check(kMaxJetOrder + 1), std::invalid_argument);
}

TEST_CASE("integration by parts closes on random blocks and sections") {
    Rng rng(101);
    for (int k = 1; k <= 4; ++k)
        for (int inst = 0; inst < 30; ++inst) {
            const int r = 1 + static_cast<int>(rng.index(3));
            const auto Phi = random_block(rng, k, r);
            std::vector<Jet<double>> ujet;
            for (int i = 0; i < r; ++i)
                ujet.push_back(Jet<double>(rng.vector(static_cast<std::size_t>(k) + 1, -1.0, 1.0)));
            CHECK(green_identity_check(Phi, ujet) <= 1e-12);
        }
}

TEST_CASE("jet-covector projection merges value and derivative blocks") {
    // k = 2: components (a0, (a1+b0)/2, b1) from xi = (a0,a1), xidot = (b0,b1)
    const std::vector<Jet<double>> xi = {Jet<double>({2.0, 4.0})};
    const std::vector<Jet<double>> xidot = {Jet<double>({3.0, 5.0})};
    const auto z = iota_star_project(xi, xidot, 2);
    REQUIRE(z.size() == 1);
    CHECK(z[0] == std::vector<double>{2.0, 3.5, 5.0});
}

TEST_CASE("dual prolongation map") {
    const auto A = action_structure();
    Rng rng(7);

    auto random_psi = [&](int k) {
        EkCovector psi;
        psi.base.k = k;
        psi.base.x = rng.vector(2, -1.0, 1.0);
        psi.base.y.resize(3);
        psi.dy.resize(3);
        for (int i = 0; i < 3; ++i) {
            psi.base.y[static_cast<std::size_t>(i)] =
                rng.vector(static_cast<std::size_t>(k), -1.0, 1.0);
            psi.dy[static_cast<std::size_t>(i)] =
                rng.vector(static_cast<std::size_t>(k), -1.0, 1.0);
        }
        psi.dx = rng.vector(2, -1.0, 1.0);
        return psi;
    };

    SUBCASE("first order: reduces to the pointwise dual map") {
        const auto psi = random_psi(1);
        const auto tk = eps_k(A, psi);

        TStarEVector w;
        w.x = psi.base.x;
        w.p = psi.dx;
        for (int i = 0; i < 3; ++i) {
            w.y.push_back(psi.base.y[static_cast<std::size_t>(i)][0]);
            w.piv.push_back(psi.dy[static_cast<std::size_t>(i)][0]);
        }
        const auto img = epsilon_apply(A, w);

        REQUIRE(tk.k == 1);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(tk.xi[i][0] == img.xi[i]);
            CHECK(tk.xi[i][1] == img.xidot[i]);
        }
        for (std::size_t a = 0; a < 2; ++a) {
            CHECK(tk.xjet[a].c[0] == w.x[a]);
            CHECK(tk.xjet[a].c[1] == img.xdot[a]);
        }
    }

    SUBCASE("the image does not depend on the ambient extension") {
        for (int k = 2; k <= 3; ++k)
            for (int inst = 0; inst < 5; ++inst) {
                const auto psi = random_psi(k);
                const auto base = eps_k(A, psi);
                EkExtension ext;
                ext.P.resize(2);
                for (auto& row : ext.P)
                    row = rng.vector(static_cast<std::size_t>(k - 1), -1.0, 1.0);
                const auto other = eps_k(A, psi, &ext);
                for (std::size_t i = 0; i < 3; ++i)
                    for (int b = 0; b <= k; ++b)
                        CHECK(base.xi[i][static_cast<std::size_t>(b)] ==
                              doctest::Approx(other.xi[i][static_cast<std::size_t>(b)])
                                  .epsilon(1e-11)
                                  .scale(1.0));
            }
    }

    SUBCASE("mixed jet output exposes the pre-projection data") {
        const auto psi = random_psi(2);
        MixedCovectorJet mixed;
        const auto tk = eps_k(A, psi, static_cast<const EkExtension*>(nullptr), 1e-6, &mixed);
        CHECK(mixed.order == 1);
        REQUIRE(mixed.xi.size() == 3);
        const auto z = iota_star_project(mixed.xi, mixed.xidot, 2);
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(z[i] == tk.xi[i]);
    }
}

TEST_CASE("block truncation drops the highest orders consistently") {
    Rng rng(55);
    auto Phi = random_block(rng, 2, 2);
    Phi.basejet = {Jet<double>(rng.vector(5, -1.0, 1.0))};
    const auto cut = block_truncate(Phi, 1);
    CHECK(cut.k == 1);
    CHECK(cut.basejet[0].order() == 2);
    CHECK(cut.xi[1][1][0] == Phi.xi[1][1][0]);
    CHECK(cut.xi[0][0].size() == 2);
    CHECK_THROWS_AS(block_truncate(cut, 2), std::invalid_argument);

    // the full-order momenta map is the kp = k, shift = 0 read
    const auto a = momenta_map(Phi);
    const auto b = momenta_map_at(Phi, Phi.k, 0);
    CHECK(a == b);
}
