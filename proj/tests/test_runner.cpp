#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "latwave/runner.hpp"

using namespace latwave;
namespace fs = std::filesystem;

namespace {

const char* kVerifyText = R"(
[run]
mode = verify

[grid]
n = 1
N = 16
hbar = 0.25

[a]
kind = constant
c0 = 1

[b]
kind = constant
c0 = 0

[data]
preset = single_mode
m = 1
)";

const char* kMixedZeroModeText = R"(
[run]
mode = verify

[grid]
n = 1
N = 8
hbar = 0.25

[a]
kind = constant
c0 = 1

[b]
kind = constant
c0 = 0

[data]
preset = single_mode
m = 0
u1_re = 1
)";

const char* kConvergeText = R"(
[run]
mode = converge

[grid]
n = 1
L = 1
hbar = 0.25 0.125 0.0625

[a]
kind = constant
c0 = 1

[b]
kind = constant
c0 = 0

[data]
preset = single_mode
m = 1
u0_re = 0
u1_re = 0.7
)";

const std::string& artifact(const RunOutcome& out, const std::string& name) {
    for (const auto& [file, body] : out.artifacts)
        if (file == name) return body;
    FAIL("missing artifact " + name);
    static const std::string empty;
    return empty;
}

std::size_t count_lines(const std::string& body) {
    std::size_t lines = 0;
    for (char c : body)
        if (c == '\n') ++lines;
    return lines;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(LATWAVE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    if (rc < 0 || !WIFEXITED(rc)) return -1;
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream file(p, std::ios::binary);
    REQUIRE(file.good());
    std::ostringstream buf;
    buf << file.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("verify run passes and emits the pinned schemas", "[runner]") {
    const ExperimentConfig cfg = parse_config(kVerifyText);
    const RunOutcome out = run_experiment(cfg);
    REQUIRE(out.exit_code == kExitOk);

    const std::string& modes = artifact(out, "modes.csv");
    REQUIRE(modes.rfind("m,beta2,C,K,exponent,realized_ratio,pass\n", 0) == 0);
    REQUIRE(count_lines(modes) == 17);  // header + one row per mode
    std::istringstream rows(modes);
    std::string line;
    std::getline(rows, line);
    while (std::getline(rows, line)) {
        REQUIRE(line.size() > 2);
        REQUIRE(line.substr(line.size() - 2) == ",1");
    }

    const std::string& aggregate = artifact(out, "aggregate.csv");
    REQUIRE(aggregate.rfind("t,l2_u,l2_du,bound,ratio\n", 0) == 0);
    REQUIRE(count_lines(aggregate) >= 3);

    const std::string& final_state = artifact(out, "final_state.csv");
    REQUIRE(final_state.rfind("k,re_u,im_u,re_du,im_du\n", 0) == 0);
    REQUIRE(count_lines(final_state) == 17);

    REQUIRE(artifact(out, "summary.txt").find("all_pass: yes") != std::string::npos);
}

TEST_CASE("identical config gives byte-identical artifacts", "[runner]") {
    const ExperimentConfig cfg = parse_config(kVerifyText);
    const RunOutcome a = run_experiment(cfg);
    const RunOutcome b = run_experiment(cfg);
    REQUIRE(a.exit_code == b.exit_code);
    REQUIRE(a.artifacts == b.artifacts);

    // the worker count must not leak into the bytes
    setenv("LATWAVE_WORKERS", "2", 1);
    const RunOutcome c = run_experiment(cfg);
    unsetenv("LATWAVE_WORKERS");
    REQUIRE(c.artifacts == a.artifacts);
}

TEST_CASE("halving the rate constant flips the zero mode to fail", "[runner]") {
    const ExperimentConfig cfg = parse_config(kMixedZeroModeText);

    const RunOutcome honest = run_experiment(cfg);
    REQUIRE(honest.exit_code == kExitOk);

    RunOptions opts;
    opts.sabotage_halve_k = true;
    const RunOutcome rigged = run_experiment(cfg, opts);
    REQUIRE(rigged.exit_code == kExitContract);
    const std::string& modes = artifact(rigged, "modes.csv");
    REQUIRE(modes.find(",0\n") != std::string::npos);
    REQUIRE(artifact(rigged, "summary.txt").find("all_pass: no") != std::string::npos);
}

TEST_CASE("converge run fits second order and emits the trailing comment", "[runner]") {
    const ExperimentConfig cfg = parse_config(kConvergeText);
    const RunOutcome out = run_experiment(cfg);
    REQUIRE(out.exit_code == kExitOk);

    const std::string& converge = artifact(out, "converge.csv");
    REQUIRE(converge.rfind("hbar,err_l2,derr_l2\n", 0) == 0);
    REQUIRE(count_lines(converge) == 5);  // header + 3 rungs + comment
    const auto comment_at = converge.find("# fitted_order=");
    REQUIRE(comment_at != std::string::npos);
    const auto residual_at = converge.find(",fit_residual=", comment_at);
    REQUIRE(residual_at != std::string::npos);

    const double fitted = std::strtod(converge.c_str() + comment_at + 15, nullptr);
    REQUIRE(fitted >= 1.8);
    REQUIRE(fitted <= 2.2);
}

TEST_CASE("solve run emits solution artifacts", "[runner]") {
    std::string text = kVerifyText;
    text.replace(text.find("mode = verify"), 13, "mode = solve");
    text.replace(text.find("preset = single_mode\nm = 1"), 26, "preset = delta");
    const ExperimentConfig cfg = parse_config(text);
    const RunOutcome out = run_experiment(cfg);
    REQUIRE(out.exit_code == kExitOk);
    REQUIRE(artifact(out, "solution.csv").rfind("t,l2_u,l2_du\n", 0) == 0);
    REQUIRE(count_lines(artifact(out, "final_state.csv")) == 17);
    REQUIRE(artifact(out, "summary.txt").find("mode: solve") != std::string::npos);
}

TEST_CASE("selftest checks all pass", "[runner]") {
    const auto checks = run_selftest_checks();
    REQUIRE(checks.size() >= 8);
    for (const auto& [name, ok] : checks) {
        INFO(name);
        REQUIRE(ok);
    }

    const RunOutcome out = run_experiment(ExperimentConfig{});
    REQUIRE(out.exit_code == kExitOk);
    REQUIRE(out.log.find("ok dft_round_trip") != std::string::npos);
    REQUIRE(out.log.find("FAIL") == std::string::npos);
}

TEST_CASE("problems the parser cannot see exit as config errors", "[runner]") {
    SECTION("verify with forcing") {
        std::string text = kVerifyText;
        text += "\n[forcing]\nkind = one\nm = 1\n";
        const RunOutcome out = run_experiment(parse_config(text));
        REQUIRE(out.exit_code == kExitConfig);
        REQUIRE(out.log.find("homogeneous") != std::string::npos);
    }
    SECTION("data mode beyond the grid Nyquist index") {
        std::string text = kVerifyText;
        text.replace(text.find("m = 1"), 5, "m = 9");
        const RunOutcome out = run_experiment(parse_config(text));
        REQUIRE(out.exit_code == kExitConfig);
        REQUIRE(out.log.find("Nyquist") != std::string::npos);
    }
    SECTION("converge ladder too coarse for the data band") {
        std::string text = kConvergeText;
        text.replace(text.find("hbar = 0.25 0.125 0.0625"), 24, "hbar = 0.5 0.25");
        text.replace(text.find("preset = single_mode\nm = 1\nu0_re = 0\nu1_re = 0.7"), 48, "preset = gaussian_series\nband = 4");
        const RunOutcome out = run_experiment(parse_config(text));
        REQUIRE(out.exit_code == kExitConfig);
    }
}

TEST_CASE("command line contract", "[runner][cli]") {
    const fs::path dir = fs::temp_directory_path() / "latwave_runner_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);

    auto write_config = [&](const char* name, std::string body, const fs::path& out_dir) {
        // the output key belongs to [run]; splice it in just before [grid]
        const auto at = body.find("\n[grid]");
        REQUIRE(at != std::string::npos);
        body.insert(at, "\noutput = " + out_dir.string() + "\n");
        const fs::path p = dir / name;
        std::ofstream file(p);
        file << body;
        return p;
    };

    SECTION("run executes a verify config deterministically") {
        const fs::path cfg1 = write_config("verify1.ini", kVerifyText, dir / "out1");
        const fs::path cfg2 = write_config("verify2.ini", kVerifyText, dir / "out2");
        REQUIRE(run_cli("run " + cfg1.string()) == 0);
        REQUIRE(run_cli("run " + cfg2.string()) == 0);
        for (const char* name : {"modes.csv", "aggregate.csv", "final_state.csv"}) {
            REQUIRE(fs::exists(dir / "out1" / name));
            REQUIRE(slurp(dir / "out1" / name) == slurp(dir / "out2" / name));
        }
        REQUIRE(fs::exists(dir / "out1" / "summary.txt"));
    }

    SECTION("the debug flag that halves K forces exit 1") {
        const fs::path cfg = write_config("rigged.ini", kMixedZeroModeText, dir / "rigged_out");
        REQUIRE(run_cli("run " + cfg.string()) == 0);
        REQUIRE(run_cli("run " + cfg.string() + " --debug-scale-k") == 1);
    }

    SECTION("config failures exit 2") {
        REQUIRE(run_cli("run " + (dir / "missing.ini").string()) == 2);
        const fs::path bad = dir / "bad.ini";
        std::ofstream(bad) << "[run]\nmode = warp\n";
        REQUIRE(run_cli("run " + bad.string()) == 2);
        REQUIRE(run_cli("") == 2);
    }

    SECTION("selftest exits 0") {
        REQUIRE(run_cli("selftest") == 0);
    }

    fs::remove_all(dir);
}
