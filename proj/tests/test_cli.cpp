#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmeas/serialization.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(QMEAS_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    const int status = pclose(pipe);
    return RunResult{WEXITSTATUS(status), out};
}

std::string scenario(const std::string& name) {
    return std::string(QMEAS_SCENARIO_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string temp_path(const std::string& name) {
    return std::string("/tmp/qmeas_test_") + name;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        std::vector<std::string> cells;
        std::istringstream cs(line);
        std::string cell;
        while (std::getline(cs, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace

TEST_CASE("run on the all-sharp singlet scenario") {
    const RunResult r = run_cli("run " + scenario("singlet_sharp.json"));
    REQUIRE(r.exit_code == 0);
    const qmeas::json rep = qmeas::json::parse(r.out);
    CHECK(std::abs(rep["lhs_sum"].get<double>()) < 1e-9);
    CHECK(rep["s_a_given_b"].get<double>() == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(rep["steering_satisfied"].get<bool>() == false);
    CHECK(rep["key_rate_lower_bound"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("run at the compatibility threshold") {
    const RunResult r = run_cli("run " + scenario("singlet_eta0707.json"));
    REQUIRE(r.exit_code == 0);
    const qmeas::json rep = qmeas::json::parse(r.out);
    CHECK(rep["steering_satisfied"].get<bool>() == true);
    CHECK(rep["key_rate_lower_bound"].get<double>() < 0.0);
    CHECK(rep["lhs_sum"].get<double>() == doctest::Approx(1.201752073386).epsilon(1e-9));
}

TEST_CASE("malformed JSON exits 2 with a position-bearing message") {
    const std::string path = temp_path("broken.json");
    std::ofstream(path) << "{ \"state\": [unterminated";
    const RunResult r = run_cli("run " + path);
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("parse error") != std::string::npos);
    CHECK(r.out.find("column") != std::string::npos);
}

TEST_CASE("missing file exits 2") {
    CHECK(run_cli("run /tmp/qmeas_does_not_exist.json").exit_code == 2);
}

TEST_CASE("invariant violations exit 3") {
    const std::string path = temp_path("bad_state.json");
    std::ofstream(path) << R"({
        "state": {"type": "matrix", "d_a": 2, "d_b": 2,
                  "rho": {"dim": 4, "entries": [[2,0],[0,0],[0,0],[0,0],
                                                 [0,0],[0,0],[0,0],[0,0],
                                                 [0,0],[0,0],[0,0],[0,0],
                                                 [0,0],[0,0],[0,0],[0,0]]}},
        "alice_x": {"type": "unsharp", "axis": [1, 0, 0], "eta": 1.0},
        "alice_z": {"type": "unsharp", "axis": [0, 0, 1], "eta": 1.0},
        "bob_x": {"type": "unsharp", "axis": [1, 0, 0], "eta": 1.0},
        "bob_z": {"type": "unsharp", "axis": [0, 0, 1], "eta": 1.0}
    })";
    const RunResult r = run_cli("run " + path);
    CHECK(r.exit_code == 3);
    CHECK(r.out.find("invariant violation") != std::string::npos);

    // A template with an unresolved sweep marker is also an invariant failure.
    const RunResult r2 = run_cli("run " + temp_path("swept.json"));
    (void)r2;  // file may not exist; the real check is below
    const std::string swept = temp_path("swept.json");
    std::ofstream(swept) << R"({
        "state": {"type": "singlet"},
        "alice_x": {"type": "unsharp", "axis": [1, 0, 0], "eta": 1.0},
        "alice_z": {"type": "unsharp", "axis": [0, 0, 1], "eta": 1.0},
        "bob_x": {"type": "unsharp", "axis": [1, 0, 0], "eta": "sweep"},
        "bob_z": {"type": "unsharp", "axis": [0, 0, 1], "eta": "sweep"}
    })";
    CHECK(run_cli("run " + swept).exit_code == 3);
}

TEST_CASE("validate subcommand") {
    const RunResult ok = run_cli("validate " + scenario("povm_z_sharp.json"));
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("valid") == 0);

    const RunResult bad = run_cli("validate " + scenario("povm_overcomplete.json"));
    CHECK(bad.exit_code == 0);
    CHECK(bad.out.find("invalid") != std::string::npos);
    CHECK(bad.out.find("sum to identity") != std::string::npos);
    CHECK(bad.out.find("0.2") != std::string::npos);

    CHECK(run_cli("validate /tmp/qmeas_does_not_exist.json").exit_code == 2);
}

TEST_CASE("eta sweep reproduces the paper grid") {
    const std::string out = temp_path("sweep.csv");
    REQUIRE(run_cli("sweep " + scenario("eta_sweep.json") + " -o " + out).exit_code == 0);
    const std::string csv = slurp(out);
    const auto rows = parse_csv(csv);
    REQUIRE(rows.size() == 102);  // header + 101 points
    CHECK(rows[0] == std::vector<std::string>{"param", "h_x_given_xp", "h_z_given_zp", "lhs_sum",
                                              "mu_bound", "memory_bound", "key_rate_lower_bound",
                                              "steering_violated", "busch_compatible"});

    // ascending parameter order
    double prev = -1.0;
    for (size_t i = 1; i < rows.size(); ++i) {
        const double p = std::stod(rows[i][0]);
        CHECK(p > prev);
        prev = p;
    }

    // endpoint eta = 1: lhs_sum = 0
    CHECK(std::abs(std::stod(rows.back()[3])) < 1e-9);

    // first steering violation at eta = 0.78
    std::string first_violated;
    for (size_t i = 1; i < rows.size(); ++i)
        if (rows[i][7] == "true") {
            first_violated = rows[i][0];
            break;
        }
    CHECK(first_violated == "0.78");

    // last analytically compatible grid point is 0.70
    std::string last_compatible;
    for (size_t i = 1; i < rows.size(); ++i)
        if (rows[i][8] == "true") last_compatible = rows[i][0];
    CHECK(last_compatible == "0.7");

    // byte-identical on a second run
    const std::string out2 = temp_path("sweep2.csv");
    REQUIRE(run_cli("sweep " + scenario("eta_sweep.json") + " -o " + out2).exit_code == 0);
    CHECK(slurp(out2) == csv);
}

TEST_CASE("werner sweep works end to end") {
    const std::string out = temp_path("werner.csv");
    REQUIRE(run_cli("sweep " + scenario("werner_sweep.json") + " -o " + out).exit_code == 0);
    const auto rows = parse_csv(slurp(out));
    REQUIRE(rows.size() == 102);
    // w = 1 is the singlet with sharp Bob: lhs 0, steering violated
    CHECK(std::abs(std::stod(rows.back()[3])) < 1e-9);
    CHECK(rows.back()[7] == "true");
    // w = 0 is uncorrelated: lhs 2, no violation
    CHECK(std::stod(rows[1][3]) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(rows[1][7] == "false");
}

TEST_CASE("jm-scan flips at the threshold and flags nothing on this grid") {
    const std::string out = temp_path("scan.csv");
    REQUIRE(run_cli("jm-scan " + scenario("xz_pair_scan.json") + " -o " + out).exit_code == 0);
    const auto rows = parse_csv(slurp(out));
    REQUIRE(rows.size() == 21);
    CHECK(rows[0] == std::vector<std::string>{"param", "busch_compatible", "solver_status",
                                              "residual", "iterations", "flagged"});
    for (size_t i = 1; i < rows.size(); ++i) {
        const double eta = std::stod(rows[i][0]);
        const std::string want = eta <= 0.7071067811865476 ? "compatible" : "incompatible";
        CHECK(rows[i][2] == want);
        CHECK(rows[i][1] == (eta <= 0.7071067811865476 ? "true" : "false"));
        CHECK(rows[i][5] == "false");
    }

    const std::string out_par = temp_path("scan_par.csv");
    REQUIRE(run_cli("jm-scan " + scenario("parallel_pair_scan.json") + " -o " + out_par).exit_code ==
            0);
    for (size_t i = 1; i < parse_csv(slurp(out_par)).size(); ++i)
        CHECK(parse_csv(slurp(out_par))[i][2] == "compatible");
}

TEST_CASE("usage errors") {
    CHECK(run_cli("").exit_code != 0);
    CHECK(run_cli("no-such-command x").exit_code != 0);
}
