#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "obsmdp/commands.hpp"

namespace {

unsigned parse_env_threads() {
    const char* env = std::getenv("OBSMDP_THREADS");
    if (!env || !*env) return 0;
    char* end = nullptr;
    const unsigned long n = std::strtoul(env, &end, 10);
    if (*end != '\0' || n == 0 || n > 1024)
        throw obsmdp::ConfigError("OBSMDP_THREADS must be a positive integer");
    return static_cast<unsigned>(n);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Observation-scheduled MDP solver: jump processes controlled "
                 "through open-loop actions between chosen observation epochs"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, preset_name, out_dir, policy_path, sweep_key;
    std::vector<double> sweep_values;
    std::uint64_t seed = 0;
    unsigned threads = 0;

    app.add_option("--config", config_path, "experiment config file (key = value sections)");
    app.add_option("--preset", preset_name, "built-in config: paper-v-c | gated-default");
    app.add_option("--out", out_dir, "output directory (overrides experiment.out_dir)");
    CLI::Option* seed_opt = app.add_option("--seed", seed, "override sim.seed");
    app.add_option("--threads", threads,
                   "worker threads (overrides OBSMDP_THREADS; default: hardware)");

    CLI::App* solve = app.add_subcommand(
        "solve", "run value iteration; writes value_table.json, policy.csv, residuals.csv");
    CLI::App* simulate = app.add_subcommand(
        "simulate", "roll out a solved policy; writes trace.csv, estimate.json");
    simulate->add_option("--policy", policy_path, "policy.csv from a solve run")->required();
    CLI::App* sweep = app.add_subcommand(
        "sweep", "re-solve over values of one numeric key; writes sweep.csv");
    sweep->add_option("--key", sweep_key, "dotted config key, e.g. inventory.kappa")
        ->required();
    sweep->add_option("--values", sweep_values, "comma-separated list")
        ->required()
        ->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (threads == 0) threads = parse_env_threads();
        if (threads > 0) obsmdp::detail::set_thread_count(threads);

        if (config_path.empty() == preset_name.empty())
            throw obsmdp::ConfigError("provide exactly one of --config or --preset");
        obsmdp::ExperimentConfig cfg = config_path.empty()
                                           ? obsmdp::load_preset(preset_name)
                                           : obsmdp::load_config_file(config_path);
        if (*seed_opt) cfg.sim.seed = seed;
        const std::filesystem::path out = out_dir.empty() ? cfg.out_dir : out_dir;

        if (solve->parsed()) return obsmdp::cmd_solve(cfg, out, std::cout);
        if (simulate->parsed())
            return obsmdp::cmd_simulate(cfg, policy_path, out, std::cout);
        return obsmdp::cmd_sweep(cfg, sweep_key, sweep_values, out, std::cout);
    } catch (const obsmdp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const obsmdp::SolveError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const obsmdp::io::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
