#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

#include "smtjpop/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"smtjpop — population coding with superparamagnetic tunnel "
                 "junctions: tuning curves, basis fitting, trial-and-error "
                 "learning, energy accounting and a quantized datapath."};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string mode;
    app.add_option("--config", config_path, "experiment config file (JSON)")
        ->required();
    auto* seed_opt =
        app.add_option("--seed", seed, "override the config's master seed");
    app.add_option("--out", out_dir, "override the config's output directory");
    app.add_option("--mode", mode, "rate source: mc or analytic")
        ->check(CLI::IsMember({"mc", "analytic"}));

    app.add_subcommand("rates", "tuning-curve tables (analytic and Monte Carlo)");
    app.add_subcommand("fit", "fit junction parameters to a rate table");
    app.add_subcommand("basis", "solve basis weights and reconstruct a target");
    app.add_subcommand("learn", "run the trial-and-error learning loop");
    app.add_subcommand("sweep", "variability / size / energy / fault sweeps");
    app.add_subcommand("datapath", "quantized system emulation with cost ledger");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }

    try {
        smtjpop::ExperimentConfig cfg = smtjpop::load_config_file(config_path);
        const std::string sub = app.get_subcommands().front()->get_name();
        if (cfg.experiment != sub)
            throw smtjpop::ConfigError("config experiment '" + cfg.experiment +
                                       "' does not match subcommand '" + sub +
                                       "'");
        if (seed_opt->count() > 0) cfg.seed = seed;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (!mode.empty())
            cfg.mode = (mode == "analytic") ? smtjpop::RateMode::analytic
                                            : smtjpop::RateMode::monte_carlo;

        smtjpop::RunResult res = smtjpop::run_experiment(cfg);
        for (const auto& f : res.files)
            std::cout << "wrote " << res.out_dir << '/' << f << '\n';
        return 0;
    } catch (const smtjpop::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const smtjpop::SimulationError& e) {
        std::cerr << "simulation error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
