#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

#ifndef SDDE_CLI_PATH
#error "SDDE_CLI_PATH must be defined by the build"
#endif

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    const std::string out_file = "cli_capture.txt";
    const std::string cmd = std::string(SDDE_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
#ifdef _WIN32
    r.exit_code = status;
#else
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#endif
    std::ifstream in(out_file, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    r.output = buf.str();
    std::remove(out_file.c_str());
    return r;
}

void write_text(const std::string& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary);
    out << text;
}

std::string read_text(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("simulate: drift_only path is exact and ends at 3") {
    const auto r = run_cli("simulate --model drift_only --n 16 --seed 5");
    REQUIRE(r.exit_code == 0);
    // last data row: t = 2, X = 1 + t
    const auto pos = r.output.find_last_of('\n', r.output.size() - 2);
    const std::string last = r.output.substr(pos + 1);
    CHECK(last.rfind("2,3", 0) == 0);
}

TEST_CASE("simulate: byte-identical reruns") {
    const auto a = run_cli("simulate --model delay_gbm --n 32 --seed 42");
    const auto b = run_cli("simulate --model delay_gbm --n 32 --seed 42");
    REQUIRE(a.exit_code == 0);
    CHECK(a.output == b.output);
    const auto c = run_cli("simulate --model delay_gbm --n 32 --seed 43");
    CHECK(c.output != a.output);
}

TEST_CASE("simulate: input validation exit codes") {
    // n * tau not integral (tau = 0.5)
    CHECK(run_cli("simulate --model delay_gbm --n 5").exit_code == 2);
    CHECK(run_cli("simulate --model no_such_model --n 16").exit_code == 2);
    CHECK(run_cli("simulate --bogus-flag").exit_code == 2);
}

TEST_CASE("probe: validation and determinism") {
    CHECK(run_cli("probe --model delay_gbm --N 0").exit_code == 2);
    CHECK(run_cli("probe --model delay_gbm --R -1").exit_code == 2);
    const auto a = run_cli("probe --model pure_sde_gbm --N 2000 --seed 9");
    const auto b = run_cli("probe --model pure_sde_gbm --N 2000 --seed 9");
    REQUIRE(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(a.output.find("\"conditions\"") != std::string::npos);
}

TEST_CASE("list-models names the builtins") {
    const auto r = run_cli("list-models");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("drift_only") != std::string::npos);
    CHECK(r.output.find("linear_pure_delay") != std::string::npos);
    CHECK(r.output.find("delay_gbm") != std::string::npos);
}

TEST_CASE("converge: config validation") {
    write_text("bad_levels.json", R"({"model": "linear_pure_delay", "levels": 1})");
    CHECK(run_cli("converge --config bad_levels.json").exit_code == 2);
    std::remove("bad_levels.json");

    write_text("bad_key.json", R"({"model": "linear_pure_delay", "pathz": 10})");
    CHECK(run_cli("converge --config bad_key.json").exit_code == 2);
    std::remove("bad_key.json");

    CHECK(run_cli("converge --config missing_file.json").exit_code == 2);
}

TEST_CASE("converge: small run writes reports and reruns byte-identically") {
    write_text("small.json", R"({"model": "linear_pure_delay", "n0": 8, "levels": 3,
                                 "paths": 20, "ref_multiplier": 8, "seed": 3})");
    const auto a = run_cli("converge --config small.json --format svg");
    REQUIRE(a.exit_code == 0);
    CHECK(a.output.find("gamma_hat") != std::string::npos);
    const std::string report = read_text("rate_report.json");
    CHECK(report.find("\"gamma_hat\"") != std::string::npos);
    const std::string csv = read_text("quantiles.csv");
    CHECK(csv.rfind("n,", 0) == 0);
    CHECK(read_text("loglog.svg").find("<svg") != std::string::npos);

    const auto b = run_cli("converge --config small.json --format svg");
    REQUIRE(b.exit_code == 0);
    CHECK(b.output == a.output);
    CHECK(read_text("rate_report.json") == report);

    std::remove("small.json");
    std::remove("rate_report.json");
    std::remove("quantiles.csv");
    std::remove("loglog.svg");
}
