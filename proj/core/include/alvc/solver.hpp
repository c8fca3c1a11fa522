// Stationary-trajectory search: least-squares collocation over a polynomial
// ansatz for the generator curve, Gauss-Newton with Levenberg damping, exact
// Jacobian columns by forward jet seeds through the whole force pipeline.

#pragma once

#include "alvc/mechanics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace alvc {

struct BoundaryEntry {
    enum class Kind {
        Fiber,        // y_index^{(order)}(endpoint) = value
        Base,         // x_index(endpoint) = value
        FreeMomentum  // momentum m[index][order](endpoint) = 0
    } kind = Kind::Fiber;
    int index = 0;
    int order = 0;
    bool at_end = true; // false: t0, true: t1
    double value = 0.0;
};

struct CollocationProblem {
    AlgebroidStructure A;
    Lagrangian L;
    std::vector<double> x0;
    double t0 = 0.0, t1 = 1.0;
    int degree = 3;  // polynomial ansatz degree in (t - t0); >= 2k-1 recommended
    int nodes = 0;   // collocation node count; 0 means max(2*(degree+1), degree+1)
    std::vector<BoundaryEntry> boundary;
    std::optional<std::vector<Expr>> external_force; // f_i(t); residual is F_i - f_i
    int flow_steps = 400;
    double penalty = 1e6; // weight on squared boundary residuals
    double lambda0 = 1e-3;
    int max_iter = 200;
    double force_tol = 1e-6;
    double boundary_tol = 1e-8;
};

struct SolveResult {
    bool converged = false;
    std::vector<std::vector<double>> coeffs;   // coeffs[i][j]: y_i = sum_j c_ij (t-t0)^j
    std::vector<double> residual_history;      // objective after each accepted step
    double force_sup = 0.0;                    // sup node |F - f| at the returned iterate
    double boundary_sup = 0.0;                 // sup raw boundary residual
    int iterations = 0;
    double jacobian_condition = 0.0;           // singular-value ratio at the final iterate
    bool jacobian_singular = false;
    std::string message;
};

struct SolutionReport {
    bool pass = false;
    double force_sup = 0.0;     // over a 4x denser node set
    double boundary_sup = 0.0;
    double force_tol = 1e-6;
    double boundary_tol = 1e-8;
    TransversalityReport trans; // endpoint momentum directions left free
};

// Chebyshev-Gauss nodes on [t0, t1], ordered increasing.
std::vector<double> chebyshev_nodes(double t0, double t1, int n);

// The admissible path defined by ansatz coefficients (numeric polynomials).
AdmissiblePath coefficients_path(const CollocationProblem& p,
                                 const std::vector<std::vector<double>>& coeffs);

SolveResult solve(const CollocationProblem& p);

SolutionReport verify_solution(const CollocationProblem& p,
                               const std::vector<std::vector<double>>& coeffs);

} // namespace alvc
