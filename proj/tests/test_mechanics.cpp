#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "alvc/mechanics.hpp"
#include "alvc/problem.hpp"

#include <cmath>

using namespace alvc;

namespace {

AdmissiblePath make_path(std::vector<std::string> y, std::vector<double> x0, double t0, double t1,
                         int steps = 1000) {
    AdmissiblePath p;
    for (const auto& s : y) p.y.push_back(parse(s));
    p.x0 = std::move(x0);
    p.t0 = t0;
    p.t1 = t1;
    p.steps = steps;
    return p;
}

doctest::Approx near(double v, double tol) { return doctest::Approx(v).epsilon(tol).scale(1.0); }

} // namespace

TEST_CASE("second-order force on the line: quartic path gives a constant force") {
    // L = y'^2 / 2 with y = 4t^3: the variational force is d^2/dt^2 (y') = 24.
    const auto A = preset_tangent(1);
    const Lagrangian L{2, parse("y1_1^2/2")};
    const auto path = make_path({"4*t^3"}, {0.0}, 0.0, 1.0);

    for (double t : {0.1, 0.3, 0.75}) {
        const auto s = force(A, L, path, t);
        REQUIRE(s.F.size() == 1);
        CHECK(s.F[0] == near(24.0, 1e-9));
    }

    // the closed-form reference agrees with the pipeline
    const auto ref = oracle_el(A, L, path, 0.3, ElFamily::Tangent);
    CHECK(ref[0] == near(24.0, 1e-9));
}

TEST_CASE("second-order momentum on the line: both ladder components") {
    const auto A = preset_tangent(1);
    const Lagrangian L{2, parse("y1_1^2/2")};
    const auto path = make_path({"4*t^3"}, {0.0}, 0.0, 1.0);

    // m0 = dL/dy' = 12t^2 pairs with u'; m1 = -d/dt dL/dy' = -24t pairs with u
    const auto s = momentum(A, L, path, 0.5);
    REQUIRE(s.m.size() == 1);
    REQUIRE(s.m[0].size() == 2);
    CHECK(s.m[0][0] == near(3.0, 1e-9));
    CHECK(s.m[0][1] == near(-12.0, 1e-9));
    // base flow of x' = 4t^3 from 0: x = t^4
    CHECK(s.basejet[0].c[0] == near(0.0625, 1e-10));

    PathEval<double> pe(A, path, {}, 0.0);
    std::vector<std::vector<double>> rate;
    (void)momentum_components(L, pe, 0.5, &rate);
    CHECK(rate[0][0] == near(12.0, 1e-9));
    CHECK(rate[0][1] == near(-24.0, 1e-9));
}

TEST_CASE("reduced equations on constant-bracket structures") {
    SUBCASE("rotation group: spin about a principal axis is force-free") {
        const auto A = preset_lie_so3();
        const Lagrangian L{1, parse("(y1_0^2 + 2*y2_0^2 + 3*y3_0^2)/2")};
        const auto path = make_path({"1", "0", "0"}, {}, 0.0, 1.0);
        for (double t : {0.0, 0.4, 1.0}) {
            const auto s = force(A, L, path, t);
            for (double f : s.F) CHECK(f == near(0.0, 1e-10));
        }
    }
    SUBCASE("rotation group: generic data matches the closed-form equations") {
        const auto A = preset_lie_so3();
        const Lagrangian L{1, parse("(y1_0^2 + 2*y2_0^2 + 3*y3_0^2)/2")};
        const auto path = make_path({"0.3*cos(t)", "-0.4", "0.25*t"}, {}, 0.0, 1.0);
        const auto s = force(A, L, path, 0.6);
        const auto ref = oracle_el(A, L, path, 0.6, ElFamily::EulerPoincare);
        REQUIRE(ref.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) CHECK(s.F[i] == near(ref[i], 1e-9));
    }
    SUBCASE("Heisenberg group: the helix solves the reduced equations exactly") {
        const auto A = preset_lie_heis3();
        const Lagrangian L{1, parse("(y1_0^2 + y2_0^2 + y3_0^2)/2")};
        const auto path = make_path({"cos(t)", "sin(t)", "1"}, {}, 0.0, 3.0);
        for (double t : {0.0, 1.1, 2.9}) {
            const auto s = force(A, L, path, t);
            for (double f : s.F) CHECK(f == near(0.0, 1e-10));
        }
    }
}

TEST_CASE("adding a total time derivative leaves the force unchanged") {
    const auto A = preset_tangent(1);
    const Lagrangian L1{2, parse("y1_1^2/2 + x1*y1_0")};
    // 2*x1*y1_0 = d(x1^2)/dt along admissible paths
    const Lagrangian L2{2, parse("y1_1^2/2 + x1*y1_0 + 2*x1*y1_0")};
    const auto path = make_path({"sin(t)"}, {0.2}, 0.0, 1.0);
    for (double t : {0.15, 0.5, 0.85}) {
        const auto a = force(A, L1, path, t);
        const auto b = force(A, L2, path, t);
        CHECK(a.F[0] == near(b.F[0], 1e-9));
    }
}

TEST_CASE("admissible variations via the duality pairing") {
    const auto A = preset_tangent(1);
    const auto path = make_path({"sin(t)"}, {0.0}, 0.0, 1.0);
    const auto v = variation_apply(A, path, {parse("t^2")}, 0.4, 2);
    REQUIRE(v.dx.size() == 1);
    REQUIRE(v.dy.size() == 1);
    REQUIRE(v.dy[0].size() == 2);
    CHECK(v.dx[0] == near(0.16, 1e-13));   // rho(x) b = t^2
    CHECK(v.dy[0][0] == near(0.8, 1e-13)); // b' = 2t
    CHECK(v.dy[0][1] == near(2.0, 1e-13)); // b'' = 2
    CHECK_THROWS_AS(variation_apply(A, path, {parse("t")}, 0.4, 7), std::invalid_argument);
    CHECK_THROWS_AS(variation_apply(A, path, {parse("t"), parse("t")}, 0.4, 2),
                    std::invalid_argument);
}

TEST_CASE("action integral") {
    const auto A = preset_tangent(1);
    const auto path = make_path({"1"}, {0.0}, 0.0, 1.0, 100);

    CHECK(action(A, Lagrangian{1, parse("1")}, path) == near(1.0, 1e-12));
    CHECK(action(A, Lagrangian{1, parse("y1_0^2/2")}, path) == near(0.5, 1e-12));

    // L = y'^2/2 along y = 4t^3 is 72 t^4, integral 14.4
    const auto quart = make_path({"4*t^3"}, {0.0}, 0.0, 1.0);
    CHECK(action(A, Lagrangian{2, parse("y1_1^2/2")}, quart) == near(14.4, 1e-9));
}

TEST_CASE("endpoint conditions against the momentum ladder") {
    const auto A = preset_tangent(1);
    const Lagrangian L{1, parse("y1_0^2/2")};

    SUBCASE("fixed endpoints need nothing") {
        const auto path = make_path({"1"}, {0.0}, 0.0, 1.0);
        BoundaryCondition bc;
        bc.kind = BoundaryCondition::Kind::Fixed;
        const auto rep = transversality_check(A, L, path, bc);
        CHECK(rep.pass);
        CHECK(rep.residuals.empty());
    }
    SUBCASE("free endpoints require vanishing momentum") {
        BoundaryCondition bc;
        bc.kind = BoundaryCondition::Kind::Free;

        const auto bad = make_path({"1"}, {0.0}, 0.0, 1.0);
        const auto rb = transversality_check(A, L, bad, bc);
        CHECK_FALSE(rb.pass);
        CHECK(rb.worst == near(1.0, 1e-12)); // momentum = y = 1 at both ends

        const auto good = make_path({"t*(1-t)"}, {0.0}, 0.0, 1.0);
        const auto rg = transversality_check(A, L, good, bc);
        CHECK(rg.pass);
        CHECK(rg.worst <= 1e-12);
    }
    SUBCASE("spanned endpoints compare pairings across the interval") {
        const auto H = preset_lie_heis3();
        const Lagrangian LH{1, parse("(y1_0^2 + y2_0^2 + y3_0^2)/2")};
        const auto helix = make_path({"cos(t)", "sin(t)", "1"}, {}, 0.0, 3.0);

        BoundaryCondition bc;
        bc.kind = BoundaryCondition::Kind::Spanned;
        // the central direction carries a conserved momentum
        bc.span = {{{parse("0"), parse("0"), parse("1")},
                    {parse("0"), parse("0"), parse("1")}}};
        const auto ok = transversality_check(H, LH, helix, bc);
        CHECK(ok.pass);
        CHECK(ok.worst <= 1e-10);

        // the first body direction does not
        bc.span = {{{parse("1"), parse("0"), parse("0")},
                    {parse("1"), parse("0"), parse("0")}}};
        const auto no = transversality_check(H, LH, helix, bc);
        CHECK_FALSE(no.pass);
        CHECK(no.worst == near(1.0 - std::cos(3.0), 1e-9));
    }
}

TEST_CASE("input validation") {
    const auto A = preset_tangent(1);
    CHECK_NOTHROW(validate_lagrangian(A, Lagrangian{2, parse("x1 + y1_0*y1_1")}));
    CHECK_THROWS_AS(validate_lagrangian(A, Lagrangian{2, parse("y1_2")}), std::invalid_argument);
    CHECK_THROWS_AS(validate_lagrangian(A, Lagrangian{1, parse("x2")}), std::invalid_argument);
    CHECK_THROWS_AS(validate_lagrangian(A, Lagrangian{1, parse("q")}), std::invalid_argument);

    const auto path = make_path({"1"}, {0.0}, 0.0, 1.0);
    CHECK_THROWS_AS(force(A, Lagrangian{7, parse("y1_0")}, path, 0.5), std::invalid_argument);

    AdmissiblePath bad = path;
    bad.t1 = bad.t0;
    CHECK_THROWS_AS(PathEval<double>(A, bad, {}, 0.0), std::invalid_argument);
    bad = path;
    bad.steps = 0;
    CHECK_THROWS_AS(PathEval<double>(A, bad, {}, 0.0), std::invalid_argument);
    bad = path;
    bad.x0 = {};
    CHECK_THROWS_AS(PathEval<double>(A, bad, {}, 0.0), std::invalid_argument);
}

TEST_CASE("base flow accuracy on a closed-form case") {
    const auto A = preset_tangent(1);
    const auto path = make_path({"2*t"}, {0.0}, 0.0, 1.0);
    PathEval<double> pe(A, path, {}, 0.0);
    CHECK(pe.x_at(0.25)[0] == near(0.0625, 1e-12));     // grid point
    CHECK(pe.x_at(0.33047)[0] == near(0.33047 * 0.33047, 1e-12)); // dense output
    const auto xj = pe.x_jets(0.5, 3);
    CHECK(xj[0].c[1] == near(1.0, 1e-12));  // x' = 2t
    CHECK(xj[0].c[2] == near(2.0, 1e-12));  // x'' = 2
    CHECK(xj[0].c[3] == near(0.0, 1e-12));

    const auto env = point_env(A, pe.point(0.5, 2));
    CHECK(env.count("x1") == 1);
    CHECK(env.count("y1_0") == 1);
    CHECK(env.count("y1_1") == 1);
    CHECK(env.at("y1_1") == near(2.0, 1e-12));
}
