// Acceptance gate: one line per criterion, each backed by an identity suite
// that checks the library against independent computations at a pinned
// tolerance.  Exits nonzero if any criterion fails.

#include "alvc/verify.hpp"

#include <cstdio>
#include <vector>

int main() {
    const std::vector<alvc::SuiteResult> results = alvc::run_all_suites(12345);

    bool all_pass = true;
    int n = 0;
    for (const auto& s : results) {
        ++n;
        std::printf("CRITERION %2d %s — %s (worst=%.3g, tol=%.3g, cases=%zu)%s%s%s\n", n,
                    s.pass ? "PASS" : "FAIL", s.name.c_str(), s.worst, s.tol, s.cases,
                    s.detail.empty() ? "" : " [", s.detail.c_str(), s.detail.empty() ? "" : "]");
        all_pass = all_pass && s.pass;
    }
    std::printf("%s\n", all_pass ? "ACCEPTANCE: all criteria satisfied"
                                 : "ACCEPTANCE: FAILURES present");
    return all_pass ? 0 : 1;
}
