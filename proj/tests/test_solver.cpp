#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "alvc/problem.hpp"
#include "alvc/solver.hpp"

#include <cmath>

using namespace alvc;

namespace {

doctest::Approx near(double v, double tol) { return doctest::Approx(v).epsilon(tol).scale(1.0); }

// Second-order line problem: minimize int y'^2/2 with y(0) = y(1) = 0 and
// base displacement x(1) = 1.  Unique stationary generator: y = 6t - 6t^2.
CollocationProblem isoperimetric_problem() {
    CollocationProblem p;
    p.A = preset_tangent(1);
    p.L = Lagrangian{2, parse("y1_1^2/2")};
    p.x0 = {0.0};
    p.t0 = 0.0;
    p.t1 = 1.0;
    p.degree = 3;
    p.boundary = {
        {BoundaryEntry::Kind::Fiber, 0, 0, false, 0.0},
        {BoundaryEntry::Kind::Fiber, 0, 0, true, 0.0},
        {BoundaryEntry::Kind::Base, 0, 0, true, 1.0},
    };
    return p;
}

} // namespace

TEST_CASE("collocation nodes are symmetric, interior and ordered") {
    const auto one = chebyshev_nodes(0.0, 1.0, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == near(0.5, 1e-15));

    const auto ns = chebyshev_nodes(-1.0, 3.0, 9);
    REQUIRE(ns.size() == 9);
    for (std::size_t i = 1; i < ns.size(); ++i) CHECK(ns[i] > ns[i - 1]);
    CHECK(ns.front() > -1.0);
    CHECK(ns.back() < 3.0);
    for (std::size_t i = 0; i < ns.size(); ++i)
        CHECK(ns[i] + ns[ns.size() - 1 - i] == near(2.0, 1e-12));
}

TEST_CASE("ansatz coefficients define the generator polynomial in (t - t0)") {
    CollocationProblem p = isoperimetric_problem();
    p.t0 = 1.0;
    p.t1 = 2.0;
    const auto path = coefficients_path(p, {{1.0, 2.0, 3.0, 0.0}});
    REQUIRE(path.y.size() == 1);
    CHECK(path.x0 == p.x0);
    CHECK(path.t0 == 1.0);
    CHECK(path.t1 == 2.0);
    Env<double> env{{"t", 1.5}};
    CHECK(eval(path.y[0], env) == near(1.0 + 2.0 * 0.5 + 3.0 * 0.25, 1e-14));
}

TEST_CASE("stationary trajectory of the displacement problem") {
    const auto p = isoperimetric_problem();
    const auto res = solve(p);

    REQUIRE(res.converged);
    CHECK(res.force_sup <= 1e-6);
    CHECK(res.boundary_sup <= 1e-8);
    REQUIRE(res.coeffs.size() == 1);
    REQUIRE(res.coeffs[0].size() == 4);
    const double want[4] = {0.0, 6.0, -6.0, 0.0};
    for (int j = 0; j < 4; ++j)
        CHECK(res.coeffs[0][static_cast<std::size_t>(j)] == near(want[j], 1e-8));

    CHECK(res.iterations >= 1);
    CHECK(res.iterations <= 50);
    CHECK_FALSE(res.jacobian_singular);
    CHECK(res.jacobian_condition >= 1.0);
    REQUIRE(!res.residual_history.empty());
    CHECK(res.residual_history.back() <= res.residual_history.front());

    SUBCASE("independent residual check on a denser grid confirms it") {
        const auto rep = verify_solution(p, res.coeffs);
        CHECK(rep.pass);
        CHECK(rep.force_sup <= 1e-6);
        CHECK(rep.boundary_sup <= 1e-8);
    }
    SUBCASE("perturbing the cubic coefficient is caught by the checker") {
        auto bad = res.coeffs;
        bad[0][3] += 0.1; // adds 0.6 to the third derivative of the generator
        const auto rep = verify_solution(p, bad);
        CHECK_FALSE(rep.pass);
        CHECK(rep.force_sup == near(0.6, 1e-6));
    }
}

TEST_CASE("first-order problem with a base constraint only") {
    CollocationProblem p;
    p.A = preset_tangent(1);
    p.L = Lagrangian{1, parse("y1_0^2/2")};
    p.x0 = {0.0};
    p.degree = 2;
    p.nodes = 6;
    p.boundary = {{BoundaryEntry::Kind::Base, 0, 0, true, 2.0}};
    const auto res = solve(p);
    REQUIRE(res.converged);
    const double want[3] = {2.0, 0.0, 0.0};
    for (int j = 0; j < 3; ++j)
        CHECK(res.coeffs[0][static_cast<std::size_t>(j)] == near(want[j], 1e-7));
}

TEST_CASE("prescribed external force shifts the stationarity condition") {
    // the force of L = y^2/2 along y is -y', so the residual -y' - 3 with
    // y(0) = 0 has the line y = -3t as its solution
    CollocationProblem p;
    p.A = preset_tangent(1);
    p.L = Lagrangian{1, parse("y1_0^2/2")};
    p.x0 = {0.0};
    p.degree = 2;
    p.nodes = 6;
    p.boundary = {{BoundaryEntry::Kind::Fiber, 0, 0, false, 0.0}};
    p.external_force = std::vector<Expr>{parse("3")};
    const auto res = solve(p);
    REQUIRE(res.converged);
    CHECK(res.coeffs[0][0] == near(0.0, 1e-7));
    CHECK(res.coeffs[0][1] == near(-3.0, 1e-7));
    CHECK(res.coeffs[0][2] == near(0.0, 1e-7));
}

TEST_CASE("identically zero objective converges with a singular system") {
    CollocationProblem p;
    p.A = preset_lie_so3();
    p.L = Lagrangian{1, parse("0")};
    p.degree = 1;
    p.nodes = 4;
    const auto res = solve(p);
    CHECK(res.converged);
    CHECK(res.force_sup == 0.0);
    CHECK(res.jacobian_singular);
}
