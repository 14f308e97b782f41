#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "latwave/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"lattice wave experiment runner"};
    app.require_subcommand(1);

    std::string config_path;
    bool sabotage = false;
    CLI::App* run = app.add_subcommand("run", "execute an experiment config and write its reports");
    run->add_option("config", config_path, "path to the experiment file")->required();
    run->add_flag("--debug-scale-k", sabotage)->group("");  // debug hook, hidden from help

    CLI::App* selftest = app.add_subcommand("selftest", "run the built-in sanity checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : latwave::kExitConfig;  // help exits 0; bad usage is a config error
    }

    if (selftest->parsed()) {
        const latwave::RunOutcome out = latwave::run_experiment(latwave::ExperimentConfig{});
        std::fputs(out.log.c_str(), stdout);
        return out.exit_code;
    }

    std::ifstream file(config_path, std::ios::binary);
    if (!file) {
        std::fprintf(stderr, "cannot read %s\n", config_path.c_str());
        return latwave::kExitConfig;
    }
    std::ostringstream buf;
    buf << file.rdbuf();

    latwave::ExperimentConfig cfg;
    try {
        cfg = latwave::parse_config(buf.str());
    } catch (const latwave::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return latwave::kExitConfig;
    }

    latwave::RunOptions opts;
    opts.sabotage_halve_k = sabotage;
    const latwave::RunOutcome out = latwave::run_experiment(cfg, opts);
    try {
        latwave::write_artifacts(out, cfg.output);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return latwave::kExitNumerical;
    }
    std::fputs(out.log.c_str(), stdout);
    return out.exit_code;
}
