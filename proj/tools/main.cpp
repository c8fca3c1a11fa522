// Command-line front end.  Subcommands:
//
//   alvc check    <problem.json>   -- structure axiom checks
//   alvc force    <problem.json>   -- CSV of t, F_1..F_r along the path
//   alvc momentum <problem.json>   -- CSV of t, m components + transversality
//   alvc solve    <problem.json>   -- collocation solve, CSV of the trajectory
//   alvc verify   [problem.json]   -- identity suites (--all without a file)
//
// Exit codes: 0 success, 2 schema violation, 3 numeric failure,
// 4 axiom/identity failure.  CSV goes to stdout or --out; reports to stderr.

#include <CLI11.hpp>

#include "alvc/csv.hpp"
#include "alvc/problem.hpp"
#include "alvc/util.hpp"
#include "alvc/verify.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSchema = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIdentity = 4;

struct CommonOpts {
    std::string file;
    std::string out;
    std::uint64_t seed = 12345;
    double tol = 1e-9;
    int samples = 0; // 0: use the problem file's value
};

std::vector<double> csv_times(const alvc::Problem& p, int samples_override) {
    const int n = samples_override > 0 ? samples_override : p.samples;
    std::vector<double> ts;
    ts.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        ts.push_back(n == 1 ? p.path.t0
                            : p.path.t0 + (p.path.t1 - p.path.t0) * j / (n - 1.0));
    return ts;
}

class CsvSink {
public:
    explicit CsvSink(const std::string& out) {
        if (!out.empty()) {
            file_.open(out);
            if (!file_) throw alvc::SchemaError("cannot open output file '" + out + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

void require_curve(const alvc::Problem& p) {
    if (!p.has_path || p.path.y.empty())
        throw alvc::SchemaError("problem: 'path.y' generator expressions required");
    if (!p.has_lagrangian)
        throw alvc::SchemaError("problem: 'lagrangian' and 'order' required");
}

int cmd_check(const CommonOpts& opt) {
    const alvc::Problem p = alvc::load_problem_file(opt.file);
    const int n = opt.samples > 0 ? opt.samples : 64;
    std::vector<std::vector<double>> pts;
    if (p.A.m == 0) {
        pts.push_back({});
    } else {
        for (int j = 0; j < n; ++j)
            pts.push_back(alvc::halton_point(static_cast<std::uint64_t>(j),
                                             static_cast<std::size_t>(p.A.m), -1.0, 1.0));
    }
    const alvc::AxiomReport rep = alvc::check_axioms(p.A, pts, opt.tol);
    std::cerr << "structure: " << (p.A.label.empty() ? "(unlabeled)" : p.A.label)
              << "  m = " << p.A.m << ", r = " << p.A.r << "\n"
              << "skew adjusted at load: " << (rep.skew_adjusted ? "yes" : "no") << "\n"
              << "max skew residual (raw input): " << alvc::format_g17(rep.max_skew) << "\n"
              << "max compatibility residual:    " << alvc::format_g17(rep.max_compat) << "\n"
              << "samples: " << rep.samples << ", tol: " << alvc::format_g17(rep.tol) << "\n"
              << "result: " << (rep.pass ? "PASS" : "FAIL") << "\n";
    return rep.pass ? kExitOk : kExitIdentity;
}

int cmd_force(const CommonOpts& opt) {
    const alvc::Problem p = alvc::load_problem_file(opt.file);
    require_curve(p);
    const auto ts = csv_times(p, opt.samples);
    const auto samples = alvc::force_samples(p.A, p.L, p.path, ts);
    std::vector<std::string> header = {"t"};
    for (int i = 0; i < p.A.r; ++i) header.push_back("F" + std::to_string(i + 1));
    std::vector<std::vector<double>> rows;
    rows.reserve(samples.size());
    for (const auto& s : samples) {
        std::vector<double> row = {s.t};
        row.insert(row.end(), s.F.begin(), s.F.end());
        rows.push_back(std::move(row));
    }
    CsvSink sink(opt.out);
    alvc::write_csv(sink.stream(), header, rows);
    return kExitOk;
}

int cmd_momentum(const CommonOpts& opt) {
    const alvc::Problem p = alvc::load_problem_file(opt.file);
    require_curve(p);
    const auto ts = csv_times(p, opt.samples);
    const auto samples = alvc::momentum_samples(p.A, p.L, p.path, ts);
    std::vector<std::string> header = {"t"};
    for (int i = 0; i < p.A.r; ++i)
        for (int beta = 0; beta <= p.L.k - 1; ++beta)
            header.push_back("m" + std::to_string(i + 1) + "_" + std::to_string(beta));
    std::vector<std::vector<double>> rows;
    rows.reserve(samples.size());
    for (const auto& s : samples) {
        std::vector<double> row = {s.t};
        for (const auto& comp : s.m) row.insert(row.end(), comp.begin(), comp.end());
        rows.push_back(std::move(row));
    }
    CsvSink sink(opt.out);
    alvc::write_csv(sink.stream(), header, rows);

    const alvc::TransversalityReport tr =
        alvc::transversality_check(p.A, p.L, p.path, p.bc, 1e-8);
    const char* kind = p.bc.kind == alvc::BoundaryCondition::Kind::Fixed   ? "fixed"
                       : p.bc.kind == alvc::BoundaryCondition::Kind::Free  ? "free"
                                                                           : "spanned";
    std::cerr << "transversality (" << kind << "): " << (tr.pass ? "PASS" : "FAIL")
              << ", worst residual " << alvc::format_g17(tr.worst) << ", tol "
              << alvc::format_g17(tr.tol) << "\n";
    return kExitOk;
}

int cmd_solve(const CommonOpts& opt) {
    const alvc::Problem p = alvc::load_problem_file(opt.file);
    alvc::CollocationProblem cp = p.collocation();
    const alvc::SolveResult sol = alvc::solve(cp);

    std::cerr << "solve: " << sol.message << " after " << sol.iterations << " iterations\n"
              << "sup node residual: " << alvc::format_g17(sol.force_sup)
              << ", sup boundary residual: " << alvc::format_g17(sol.boundary_sup) << "\n"
              << "jacobian condition estimate: " << alvc::format_g17(sol.jacobian_condition)
              << (sol.jacobian_singular ? " (numerically singular)" : "") << "\n";
    for (int i = 0; i < p.A.r; ++i) {
        std::cerr << "y" << (i + 1) << " coefficients:";
        for (double c : sol.coeffs[static_cast<std::size_t>(i)])
            std::cerr << ' ' << alvc::format_g17(c);
        std::cerr << '\n';
    }
    std::cerr << "residual history:";
    for (double rnorm : sol.residual_history) std::cerr << ' ' << alvc::format_g17(rnorm);
    std::cerr << '\n';

    const alvc::SolutionReport rep = alvc::verify_solution(cp, sol.coeffs);
    std::cerr << "verification (4x nodes): " << (rep.pass ? "PASS" : "FAIL")
              << ", sup force " << alvc::format_g17(rep.force_sup) << ", sup boundary "
              << alvc::format_g17(rep.boundary_sup) << ", transversality "
              << (rep.trans.pass ? "PASS" : "FAIL") << '\n';

    // Trajectory CSV on the sample grid.
    alvc::Problem psol = p;
    psol.path = alvc::coefficients_path(cp, sol.coeffs);
    psol.has_path = true;
    const auto ts = csv_times(psol, opt.samples);
    alvc::PathEval<double> pe(cp.A, psol.path, {}, 0.0);
    std::vector<std::string> header = {"t"};
    for (int a = 0; a < p.A.m; ++a) header.push_back("x" + std::to_string(a + 1));
    for (int i = 0; i < p.A.r; ++i) header.push_back("y" + std::to_string(i + 1));
    for (int i = 0; i < p.A.r; ++i) header.push_back("F" + std::to_string(i + 1));
    std::vector<std::vector<double>> rows;
    rows.reserve(ts.size());
    for (double t : ts) {
        std::vector<double> row = {t};
        const auto xv = pe.x_at(t);
        row.insert(row.end(), xv.begin(), xv.end());
        const auto yv = pe.y_values(t);
        row.insert(row.end(), yv.begin(), yv.end());
        const auto F = alvc::force_components(cp.L, pe, t);
        row.insert(row.end(), F.begin(), F.end());
        rows.push_back(std::move(row));
    }
    CsvSink sink(opt.out);
    alvc::write_csv(sink.stream(), header, rows);

    return (sol.converged && rep.pass) ? kExitOk : kExitNumeric;
}

int cmd_verify(const CommonOpts& opt, bool all) {
    if (!all && !opt.file.empty()) {
        // Validate the file first so 'verify <file>' doubles as a lint.
        const alvc::Problem p = alvc::load_problem_file(opt.file);
        (void)p;
    }
    const auto results = alvc::run_all_suites(opt.seed);
    bool pass = true;
    for (const auto& s : results) {
        std::cerr << (s.pass ? "PASS" : "FAIL") << "  " << s.name << "  worst "
                  << alvc::format_g17(s.worst) << "  tol " << alvc::format_g17(s.tol)
                  << "  cases " << s.cases;
        if (!s.detail.empty()) std::cerr << "  (" << s.detail << ")";
        std::cerr << '\n';
        pass = pass && s.pass;
    }
    std::cerr << (pass ? "all identity suites passed" : "identity suite FAILURES present")
              << '\n';
    return pass ? kExitOk : kExitIdentity;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"higher-order variational calculus on almost Lie algebroids"};
    app.require_subcommand(1);

    CommonOpts opt;
    bool verify_all = false;

    auto add_common = [&](CLI::App* sub, bool file_required) {
        auto* f = sub->add_option("file", opt.file, "problem JSON file");
        if (file_required) f->required();
        sub->add_option("--out", opt.out, "write CSV here instead of stdout");
        sub->add_option("--seed", opt.seed, "seed for randomized suites");
        sub->add_option("--tol", opt.tol, "tolerance for axiom checks");
        sub->add_option("--samples", opt.samples, "override the sample count");
    };

    auto* check = app.add_subcommand("check", "run structure axiom checks");
    add_common(check, true);
    auto* force = app.add_subcommand("force", "sample the higher-order force along the path");
    add_common(force, true);
    auto* momentum = app.add_subcommand("momentum", "sample the momentum map along the path");
    add_common(momentum, true);
    auto* solve = app.add_subcommand("solve", "find a stationary trajectory by collocation");
    add_common(solve, true);
    auto* verify = app.add_subcommand("verify", "run the identity suites");
    add_common(verify, false);
    verify->add_flag("--all", verify_all, "run every suite (default when no file is given)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitSchema;
    }

    try {
        if (check->parsed()) return cmd_check(opt);
        if (force->parsed()) return cmd_force(opt);
        if (momentum->parsed()) return cmd_momentum(opt);
        if (solve->parsed()) return cmd_solve(opt);
        if (verify->parsed()) return cmd_verify(opt, verify_all || opt.file.empty());
    } catch (const alvc::SchemaError& e) {
        std::cerr << "schema error: " << e.what() << '\n';
        return kExitSchema;
    } catch (const alvc::ParseError& e) {
        std::cerr << "expression error: " << e.what() << '\n';
        return kExitSchema;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitSchema;
}
