// Identity suites: each function exercises one contract of the library
// against an independent computation (exact combinatorics, closed forms, or
// a second implementation path) on randomized instances, and reports the
// worst residual seen.  The CLI `verify` command and the acceptance test
// binary both run these.

#pragma once

#include "alvc/problem.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace alvc {

struct SuiteResult {
    std::string name;
    bool pass = false;
    double worst = 0.0;
    double tol = 0.0;
    std::size_t cases = 0;
    std::string detail;
};

SuiteResult suite_binom();                                // exact binomial identities, k <= 12
SuiteResult suite_green(std::uint64_t seed);              // integration-by-parts residual
SuiteResult suite_pk(std::uint64_t seed);                 // projection defining property
SuiteResult suite_eps_lie(std::uint64_t seed);            // eps_k vs Lie closed form
SuiteResult suite_extension_independence(std::uint64_t seed);
SuiteResult suite_force_oracles(std::uint64_t seed);      // pipeline vs closed-form families
SuiteResult suite_momentum_oracle(std::uint64_t seed);    // tangent momenta, k = 2, 3
SuiteResult suite_variational_identity(std::uint64_t seed);
SuiteResult suite_solver_benchmark();                     // interpolating-cubic benchmark
SuiteResult suite_k1_degenerate(std::uint64_t seed);      // first-order stack equality

std::vector<SuiteResult> run_all_suites(std::uint64_t seed);

} // namespace alvc
