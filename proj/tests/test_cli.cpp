#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include <sys/wait.h>

// CLI_BINARY_PATH, PRESET_DIR and FIXTURE_DIR are provided by the build.

namespace {

struct RunResult {
    int status = -1;
    std::string out;
};

RunResult run_cli(const std::string& args, bool merge_stderr = false) {
    const std::string cmd =
        std::string(CLI_BINARY_PATH) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int rc = pclose(pipe);
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

std::string preset(const std::string& name) {
    return std::string("\"") + PRESET_DIR + "/" + name + "\"";
}

std::string fixture(const std::string& name) {
    return std::string("\"") + FIXTURE_DIR + "/" + name + "\"";
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    for (std::size_t pos = 0; pos <= text.size(); ++pos) {
        if (pos == text.size() || text[pos] == '\n') {
            if (!line.empty()) {
                std::vector<std::string> cells;
                std::string cell;
                for (char ch : line) {
                    if (ch == ',') {
                        cells.push_back(cell);
                        cell.clear();
                    } else {
                        cell.push_back(ch);
                    }
                }
                cells.push_back(cell);
                rows.push_back(std::move(cells));
            }
            line.clear();
        } else {
            line.push_back(text[pos]);
        }
    }
    return rows;
}

} // namespace

TEST_CASE("structure check: clean preset passes, incompatible fixture exits 4") {
    const auto ok = run_cli("check " + preset("heis3_k1_helix.json"));
    CHECK(ok.status == 0);
    CHECK(ok.out.empty()); // report goes to stderr, stdout stays clean

    const auto bad = run_cli("check " + fixture("broken.json"), true);
    CHECK(bad.status == 4);
    CHECK(bad.out.find("FAIL") != std::string::npos);
    CHECK(bad.out.find("compatibility") != std::string::npos);
}

TEST_CASE("force CSV: constant force of the quartic path, deterministic output") {
    const auto r = run_cli("force " + preset("tangent_k2_quartic.json"));
    REQUIRE(r.status == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 12); // header + 11 samples
    REQUIRE(rows[0].size() == 2);
    CHECK(rows[0][0] == "t");
    CHECK(rows[0][1] == "F1");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double F = std::stod(rows[i][1]);
        CHECK(std::abs(F - 24.0) <= 1e-9);
    }

    const auto again = run_cli("force " + preset("tangent_k2_quartic.json"));
    CHECK(again.status == 0);
    CHECK(again.out == r.out); // byte-identical on repeat runs
}

TEST_CASE("force CSV: exact solutions report zero force") {
    const auto r = run_cli("force " + preset("heis3_k1_helix.json"));
    REQUIRE(r.status == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() >= 2);
    REQUIRE(rows[0].size() == 4);
    for (std::size_t i = 1; i < rows.size(); ++i)
        for (std::size_t j = 1; j < rows[i].size(); ++j)
            CHECK(std::abs(std::stod(rows[i][j])) <= 1e-9);
}

TEST_CASE("momentum CSV carries both ladder components") {
    const auto r = run_cli("momentum " + preset("tangent_k2_quartic.json"));
    REQUIRE(r.status == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 12);
    REQUIRE(rows[0].size() == 3);
    CHECK(rows[0][1] == "m1_0");
    CHECK(rows[0][2] == "m1_1");
    // row at t = 0.5: m1_0 = 12 t^2 = 3, m1_1 = -24 t = -12
    const auto& mid = rows[6];
    CHECK(std::abs(std::stod(mid[0]) - 0.5) <= 1e-15);
    CHECK(std::abs(std::stod(mid[1]) - 3.0) <= 1e-9);
    CHECK(std::abs(std::stod(mid[2]) + 12.0) <= 1e-9);
}

TEST_CASE("solve: collocation converges and reports the trajectory") {
    const auto r = run_cli("solve " + preset("solver_cubic.json"), true);
    REQUIRE(r.status == 0);
    CHECK(r.out.find("converged") != std::string::npos);
    CHECK(r.out.find("verification (4x nodes): PASS") != std::string::npos);
}

TEST_CASE("solve --out writes the CSV to a file and keeps stdout clean") {
    const std::string out = "/tmp/alvc_cli_solve_out.csv";
    std::remove(out.c_str());
    const auto r = run_cli("solve " + preset("tangent_k1_line.json") + " --out \"" + out + "\"");
    REQUIRE(r.status == 0);
    CHECK(r.out.empty());
    std::ifstream f(out);
    REQUIRE(f.good());
    std::string header;
    std::getline(f, header);
    CHECK(header == "t,x1,y1,F1");
    std::remove(out.c_str());
}

TEST_CASE("schema violations exit 2") {
    const std::string bad = "/tmp/alvc_cli_bad.json";
    {
        std::ofstream f(bad);
        f << "{ this is not json";
    }
    CHECK(run_cli("force \"" + bad + "\"").status == 2);
    std::remove(bad.c_str());

    CHECK(run_cli("force \"/tmp/alvc_cli_no_such_file.json\"").status == 2);
    CHECK(run_cli("").status == 2);               // missing subcommand
    CHECK(run_cli("frobnicate x.json").status == 2);
}

TEST_CASE("identity suites run green through the CLI") {
    const auto r = run_cli("verify", true);
    CHECK(r.status == 0);
    CHECK(r.out.find("all identity suites passed") != std::string::npos);
    CHECK(r.out.find("FAIL") == std::string::npos);
}
