// Batch experiment runner: reads a TOML config naming one of the commands
// {divergence-audit, stein-scan, ergodic-scan, thermo-convert, counterexample,
// property-suite} and emits CSV/JSON artifacts.  Exit codes: 0 pass,
// 1 invariant failure, 2 usage or config error.

#include <cstdint>
#include <iostream>

#include "CLI11.hpp"
#include "oneshot/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"one-shot divergence and thermodynamic state-conversion workbench"};
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 1;
    bool list_anchors = false;

    app.add_option("--config", config_path, "experiment config (TOML)");
    auto* seed_opt = app.add_option("--seed", seed, "64-bit seed override");
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--jobs", jobs, "parallel scan workers")->capture_default_str();
    app.add_flag("--list-anchors", list_anchors, "print the named-check registry and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    seed_set = seed_opt->count() > 0;

    if (list_anchors) {
        for (const auto& [name, desc] : oneshot::config::check_anchors())
            std::cout << name << ": " << desc << "\n";
        return 0;
    }
    if (config_path.empty()) {
        std::cerr << "usage error: --config is required (or --list-anchors)\n";
        return 2;
    }

    oneshot::config::RunOptions opt;
    opt.config_path = config_path;
    opt.out_dir = out_dir;
    opt.jobs = jobs;
    if (seed_set) opt.seed = seed;

    std::string log;
    const int code = oneshot::config::run_experiment(opt, &log);
    std::cout << log;
    return code;
}
