// End-to-end tests for the experiment runner binary.  The binary path comes
// in through the ESCAPE_CLI_BINARY compile definition.

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

fs::path work_dir(const std::string& name) {
    const fs::path p = fs::current_path() / "cli_test_artifacts" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args, const fs::path& stderr_to = {}) {
    std::string cmd = std::string(ESCAPE_CLI_BINARY) + " " + args + " >/dev/null";
    cmd += stderr_to.empty() ? " 2>/dev/null" : " 2>" + stderr_to.string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json load_json(const fs::path& p) { return json::parse(read_file(p)); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("constants subcommand emits the unit ledger") {
    const auto dir = work_dir("constants");
    write_file(dir / "cfg", "volume.kind = power\n"
                            "volume.d = 2\n"
                            "scale.beta = 1\n"
                            "kernel_bounds.L1 = 1\n"
                            "kernel_bounds.L2 = 1\n"
                            "comparability.cv1 = 1\n"
                            "comparability.cv2 = 1\n"
                            "mode = critical\n");
    const int rc = run_cli("constants --config " + (dir / "cfg").string() +
                           " --output-dir " + dir.string());
    REQUIRE(rc == 0);
    const json j = load_json(dir / "constants_summary.json");
    CHECK(std::stod(j["ledger"]["K1"].get<std::string>()) == doctest::Approx(4.0));
    CHECK(std::stod(j["ledger"]["K_star"].get<std::string>()) == doctest::Approx(1.0));
    CHECK(std::stod(j["ledger"]["K2"].get<std::string>()) == doctest::Approx(1.0 / 40.0));
    CHECK(std::stod(j["ledger"]["H1"].get<std::string>()) == doctest::Approx(8.0));
    CHECK(std::stod(j["ledger"]["H2"].get<std::string>()) == doctest::Approx(12.0));
    CHECK(std::stod(j["ledger"]["K3"].get<std::string>()) == doctest::Approx(4.0));
    CHECK(std::stod(j["ledger"]["K4"].get<std::string>()) == doctest::Approx(0.25));
    CHECK(j["config"]["scale.beta1"] == "1");
    CHECK(fs::exists(dir / "constants_detail.csv"));
    CHECK(fs::exists(dir / "constants_meta.json"));
}

TEST_CASE("classify subcommand reports the integral-test verdict") {
    const auto dir = work_dir("classify");
    write_file(dir / "cfg", "volume.kind = power\n"
                            "volume.d = 3\n"
                            "scale.beta = 2\n"
                            "rate.family = log_power\n"
                            "rate.param = 2\n"
                            "mode = transient\n");
    const int rc = run_cli("classify --config " + (dir / "cfg").string() +
                           " --output-dir " + dir.string());
    REQUIRE(rc == 0);
    const json j = load_json(dir / "classify_summary.json");
    CHECK(j["classification"] == "Converges");
    CHECK(j["verdict"] == "ProbabilityOne");
    // Detail CSV: header plus 200 integrand samples.
    const std::string csv = read_file(dir / "classify_detail.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 201);

    // The divergent counterpart flips the verdict.
    write_file(dir / "cfg2", "volume.kind = power\n"
                             "volume.d = 3\n"
                             "scale.beta = 2\n"
                             "rate.family = log_power\n"
                             "rate.param = 1\n"
                             "mode = transient\n");
    REQUIRE(run_cli("classify --config " + (dir / "cfg2").string() + " --output-dir " +
                    dir.string()) == 0);
    CHECK(load_json(dir / "classify_summary.json")["verdict"] == "ProbabilityZero");
}

TEST_CASE("bad configs exit with code 2") {
    const auto dir = work_dir("badcfg");
    write_file(dir / "cfg", "volume.kinds = power\n");
    const auto errfile = dir / "stderr.txt";
    CHECK(run_cli("constants --config " + (dir / "cfg").string() + " --output-dir " +
                      dir.string(),
                  errfile) == 2);
    CHECK(read_file(errfile).find("unknown key") != std::string::npos);

    write_file(dir / "dup", "scale.beta = 1\nscale.beta = 2\n");
    CHECK(run_cli("constants --config " + (dir / "dup").string() + " --output-dir " +
                  dir.string()) == 2);

    // Unknown flag and missing subcommand are parse errors.
    CHECK(run_cli("constants --no-such-flag") == 2);
    CHECK(run_cli("") == 2);
    CHECK(run_cli("--help") == 0);
}

TEST_CASE("inconclusive classification exits with code 3") {
    const auto dir = work_dir("inconclusive");
    write_file(dir / "cfg", "rate.family = tabulated\n"
                            "rate.table_t = 1,10,100\n"
                            "rate.table_g = 0.9,0.5,0.1\n"
                            "scale.beta = 1\n"
                            "mode = critical\n");
    const auto errfile = dir / "stderr.txt";
    CHECK(run_cli("classify --config " + (dir / "cfg").string() + " --output-dir " +
                      dir.string(),
                  errfile) == 3);
    CHECK(read_file(errfile).find("inconclusive") != std::string::npos);
}

TEST_CASE("estimate artifacts are byte-identical across reruns") {
    const auto d1 = work_dir("estimate1");
    const auto d2 = work_dir("estimate2");
    const std::string cfg_text = "volume.kind = power\n"
                                 "volume.d = 1\n"
                                 "scale.beta = 1\n"
                                 "rate.family = power\n"
                                 "rate.param = 1\n"
                                 "process.alpha = 1\n"
                                 "process.dim = 1\n"
                                 "plan.t_start = 2\n"
                                 "plan.t_max = 8\n"
                                 "plan.grid_ratio = 1.3\n"
                                 "plan.n_paths = 500\n"
                                 "plan.seed = 7\n"
                                 "mode = critical\n";
    write_file(d1 / "cfg", cfg_text);
    write_file(d2 / "cfg", cfg_text);
    REQUIRE(run_cli("estimate --config " + (d1 / "cfg").string() + " --output-dir " +
                    d1.string()) == 0);
    REQUIRE(run_cli("estimate --config " + (d2 / "cfg").string() + " --output-dir " +
                    d2.string()) == 0);
    CHECK(read_file(d1 / "estimate_summary.json") ==
          read_file(d2 / "estimate_summary.json"));
    CHECK(read_file(d1 / "estimate_detail.csv") == read_file(d2 / "estimate_detail.csv"));
    const json j = load_json(d1 / "estimate_summary.json");
    CHECK(j["n_paths"] == 500);
    CHECK(std::stod(j["q_hat"].get<std::string>()) > 0.0);
}

TEST_CASE("sweep produces one row per t with decaying estimates") {
    const auto dir = work_dir("sweep");
    write_file(dir / "cfg", "volume.kind = power\n"
                            "volume.d = 1\n"
                            "scale.beta = 1\n"
                            "rate.family = power\n"
                            "rate.param = 1\n"
                            "process.alpha = 1\n"
                            "process.dim = 1\n"
                            "plan.t_start = 1\n"
                            "plan.t_max = 100\n"
                            "plan.n_paths = 2000\n"
                            "plan.seed = 5\n"
                            "mode = critical\n");
    REQUIRE(run_cli("sweep --config " + (dir / "cfg").string() + " --t-list 16,64" +
                    " --output-dir " + dir.string()) == 0);
    const json j = load_json(dir / "sweep_summary.json");
    REQUIRE(j["points"].size() == 2);
    const double q16 = std::stod(j["points"][0]["q_hat"].get<std::string>());
    const double q64 = std::stod(j["points"][1]["q_hat"].get<std::string>());
    CHECK(q16 > q64);
    // The horizon scales with t: t_max = 100 t.
    const std::string csv = read_file(dir / "sweep_detail.csv");
    CHECK(csv.find("64,6400,") != std::string::npos);
    CHECK(run_cli("sweep --config " + (dir / "cfg").string() + " --output-dir " +
                  dir.string()) == 2);  // --t-list is required
}

TEST_CASE("hitting-audit subcommand") {
    const auto dir = work_dir("audit");
    REQUIRE(run_cli("hitting-audit --regime critical --n-queries 4 --seed 9"
                    " --output-dir " +
                    dir.string()) == 0);
    const json j = load_json(dir / "hitting-audit_summary.json");
    CHECK(j["n_queries"] == 4);
    CHECK(j["n_pass"].get<int>() >= 3);
    const std::string csv = read_file(dir / "hitting-audit_detail.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    CHECK(run_cli("hitting-audit --regime nonsense --output-dir " + dir.string()) == 2);
}

TEST_CASE("audit-geometry subcommand") {
    const auto dir = work_dir("geo");
    write_file(dir / "cfg", "volume.kind = two_regime\n"
                            "volume.alpha1 = 2\n"
                            "volume.alpha2 = 3\n"
                            "scale.beta1 = 1\n"
                            "scale.beta2 = 2\n");
    REQUIRE(run_cli("audit-geometry --config " + (dir / "cfg").string() +
                    " --output-dir " + dir.string()) == 0);
    const json j = load_json(dir / "audit-geometry_summary.json");
    CHECK(j["volume_audit"]["pass"] == true);
    CHECK(j["scale_audit"]["pass"] == true);
}

TEST_CASE("kernel-verify subcommand certifies bounded spread") {
    const auto dir = work_dir("kernel");
    REQUIRE(run_cli("kernel-verify --gamma 0.5 --dim 1 --output-dir " + dir.string()) ==
            0);
    const json j = load_json(dir / "kernel-verify_summary.json");
    CHECK(j["n_points"] == 100);
    const double spread = std::stod(j["spread"].get<std::string>());
    CHECK(spread > 1.0);
    CHECK(spread < 50.0);
}

}  // TEST_SUITE
