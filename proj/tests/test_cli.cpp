#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

// End-to-end checks of the installed binary: exit codes are stable API
// (0 success, 2 configuration, 3 blow-up) and outputs are byte-identical
// across thread counts.

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(SNLS_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    CliResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) result.output += buf.data();
    const int status = pclose(pipe);
    result.exit_code = WEXITSTATUS(status);
    return result;
}

std::string write_temp_config(const std::string& name, const std::string& body) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << body;
    return path.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return all;
}

const char* kSmallRun = R"(
[grid]
n = 128
[noise]
gamma0 = 0.5
seed = 5
[time]
t_end = 0.2
dt = 2e-3
snapshot_stride = 10
[ensemble]
paths = 8
rho = 2, 5
)";

}  // namespace

TEST_CASE("missing config file exits 2 and names the path") {
    const CliResult r = run_cli("simulate --config /nonexistent/path.cfg");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("/nonexistent/path.cfg") != std::string::npos);
}

TEST_CASE("invalid config exits 2") {
    const std::string cfg = write_temp_config("cli_bad.cfg", "[grid]\nn = 100\n");
    const CliResult r = run_cli("simulate --config " + cfg);
    CHECK(r.exit_code == 2);
}

TEST_CASE("simulate: small-data run exits 0 with tiny mass drift") {
    const std::string cfg = write_temp_config("cli_small.cfg", kSmallRun);
    const auto out = std::filesystem::temp_directory_path() / "cli_sim_out";
    const CliResult r = run_cli("simulate --config " + cfg + " --out " + out.string());
    CHECK(r.exit_code == 0);
    const auto pos = r.output.find("mass drift = ");
    REQUIRE(pos != std::string::npos);
    const double drift = std::stod(r.output.substr(pos + 13));
    CHECK(drift < 1e-10);
    CHECK(std::filesystem::exists(out / "trajectory.csv"));
    CHECK(std::filesystem::exists(out / "norms.csv"));
}

TEST_CASE("simulate: above-threshold focusing run exits 3 with a step index") {
    const std::string cfg = write_temp_config("cli_blow.cfg", R"(
[grid]
n = 512
[equation]
sign = focusing
[noise]
gamma0 = 0
[initial]
profile = ground-state
amplitude = 1.5
[time]
t_end = 1.0
dt = 1e-4
snapshot_stride = 1000
blowup_growth = 2
)");
    const CliResult r = run_cli("simulate --config " + cfg);
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("step") != std::string::npos);
}

TEST_CASE("ensemble: stats written, byte-identical across thread counts") {
    const std::string cfg = write_temp_config("cli_ens.cfg", kSmallRun);
    const auto out1 = std::filesystem::temp_directory_path() / "cli_ens1";
    const auto out2 = std::filesystem::temp_directory_path() / "cli_ens2";
    const CliResult r1 =
        run_cli("ensemble --config " + cfg + " --out " + out1.string() + " --threads 1");
    const CliResult r2 =
        run_cli("ensemble --config " + cfg + " --out " + out2.string() + " --threads 4");
    CHECK(r1.exit_code == 0);
    CHECK(r2.exit_code == 0);
    const std::string a = slurp((out1 / "ensemble_stats.csv").string());
    const std::string b = slurp((out2 / "ensemble_stats.csv").string());
    CHECK(!a.empty());
    CHECK(a == b);
}

TEST_CASE("ensemble: rho below one exits 2") {
    const std::string cfg = write_temp_config("cli_rho.cfg", "[ensemble]\nrho = 0.5\n");
    CHECK(run_cli("ensemble --config " + cfg).exit_code == 2);
}

TEST_CASE("experiment: unknown name exits 2 listing valid names") {
    const CliResult r = run_cli("experiment what-is-this");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("subcritical-limit") != std::string::npos);
    CHECK(r.output.find("mass-growth") != std::string::npos);
}

TEST_CASE("experiment: burkholder exits 0 and writes the report") {
    const auto out = std::filesystem::temp_directory_path() / "cli_exp_out";
    const CliResult r = run_cli("experiment burkholder --out " + out.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("verdict: PASS") != std::string::npos);
    CHECK(std::filesystem::exists(out / "burkholder.txt"));
    CHECK(std::filesystem::exists(out / "burkholder.csv"));
}
