// Problem files and shipped structure presets.  A problem file is a JSON
// document:
//
//   {
//     "algebroid": {"preset": "tangent", "n": 1}
//                | {"preset": "lie", "name": "so3" | "heis3"}
//                | {"preset": "product", "factors": [<algebroid>, ...]}
//                | {"preset": "custom", "m": M, "r": R,
//                   "rho": [[expr x R] x M], "c": [[[expr x R] x R] x R]},
//     "order": k,
//     "lagrangian": "expr in x1.., y1_0..",
//     "path": {"y": ["expr in t", ...], "x0": [numbers], "steps": 1000},
//     "interval": [t0, t1],
//     "samples": N,
//     "boundary": {"kind": "fixed" | "free" | "spanned",
//                  "span": [{"b0": [exprs], "b1": [exprs]}, ...],
//                  "entries": [{"kind": "fiber"|"base"|"momentum",
//                               "index": 1-based, "order": alpha,
//                               "end": 0|1, "value": v}, ...]},
//     "solver": {"degree": d, "nodes": N, "penalty": w, "max_iter": n,
//                "lambda0": l, "force_tol": f, "boundary_tol": b,
//                "flow_steps": n, "external_force": [exprs in t]}
//   }
//
// Only "algebroid" is mandatory for cmd_check; the other sections are
// required by the commands that consume them.  Malformed documents raise
// SchemaError.

#pragma once

#include "alvc/solver.hpp"

#include <string>

namespace alvc {

struct SchemaError : std::runtime_error {
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

AlgebroidStructure preset_tangent(int n);
AlgebroidStructure preset_lie_so3();
AlgebroidStructure preset_lie_heis3();
AlgebroidStructure preset_product(const std::vector<AlgebroidStructure>& factors);

struct Problem {
    AlgebroidStructure A;
    bool has_lagrangian = false;
    Lagrangian L;
    bool has_path = false;
    AdmissiblePath path;
    int samples = 11;
    BoundaryCondition bc; // transversality reporting (default: fixed)
    std::vector<BoundaryEntry> entries;
    // solver section (defaults match CollocationProblem)
    int degree = 3;
    int nodes = 0;
    double penalty = 1e6;
    int max_iter = 200;
    double lambda0 = 1e-3;
    double force_tol = 1e-6;
    double boundary_tol = 1e-8;
    int flow_steps = 400;
    bool has_external_force = false;
    std::vector<Expr> external_force;

    CollocationProblem collocation() const;
};

Problem load_problem(const std::string& json_text);
Problem load_problem_file(const std::string& path);

} // namespace alvc
