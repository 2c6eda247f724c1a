#pragma once

#include <cmath>
#include <filesystem>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "obsmdp/config.hpp"
#include "obsmdp/detail/rng.hpp"
#include "obsmdp/dp.hpp"
#include "obsmdp/gated_queue.hpp"
#include "obsmdp/inventory.hpp"
#include "obsmdp/io.hpp"
#include "obsmdp/simulate.hpp"

namespace obsmdp {

namespace detail {

struct SolveArtifacts {
    ValueTable v;
    StagePolicy policy;
};

inline SolveArtifacts solve_configured(const ExperimentConfig& cfg) {
    if (cfg.model == "inventory") {
        const InventoryModel model(cfg.inventory_params(), cfg.solver_options());
        VIResult r = solve_inventory(model, cfg.solver.max_iter);
        return SolveArtifacts{std::move(r.v), std::move(r.policy)};
    }
    const GatedQueueModel model(cfg.queue);
    ValueTable v0(model.state_window());
    VIResult r = value_iteration(model, std::move(v0), cfg.solver.eps_vi, cfg.solver.max_iter);
    return SolveArtifacts{std::move(r.v), std::move(r.policy)};
}

}  // namespace detail

// Solve the configured model and write value_table.json, policy.csv and
// residuals.csv. Non-convergence still writes the residual history and
// returns 3. The queue model additionally writes overrun.csv: the probability
// that a batch is not fully served within the chosen interval.
inline int cmd_solve(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                     std::ostream& log) {
    cfg.validate();
    std::filesystem::create_directories(out_dir);

    detail::SolveArtifacts art;
    try {
        art = detail::solve_configured(cfg);
    } catch (const SolveError& e) {
        io::write_residuals_csv(out_dir / "residuals.csv", e.partial_result.residual_history);
        log << "solve: " << e.what() << "\n";
        log << "wrote " << (out_dir / "residuals.csv").string() << "\n";
        return 3;
    }

    io::write_value_table_json(out_dir / "value_table.json", cfg.model, art.v);
    io::write_policy_csv(out_dir / "policy.csv", art.policy, art.v);
    io::write_residuals_csv(out_dir / "residuals.csv", art.v.residual_history);
    log << "solve: converged in " << art.v.iteration_count << " sweeps (last residual "
        << io::format_double(art.v.residual_history.back()) << ")\n";

    if (cfg.model == "gated-queue") {
        std::string out = "x,a_star,overrun_probability\n";
        for (const PolicyEntry& e : art.policy.entries)
            out += std::to_string(e.x) + "," + io::format_double(e.a) + "," +
                   io::format_double(service_overrun_probability(e.x, e.a, e.T)) + "\n";
        io::atomic_write_text(out_dir / "overrun.csv", out);
        log << "wrote " << (out_dir / "overrun.csv").string() << "\n";
    }

    log << "wrote " << (out_dir / "value_table.json").string() << ", "
        << (out_dir / "policy.csv").string() << ", "
        << (out_dir / "residuals.csv").string() << "\n";
    return 0;
}

// Roll out a previously solved policy: trace.csv holds rollout 0 event by
// event, estimate.json the mean discounted cost over sim.n_rollouts runs.
inline int cmd_simulate(const ExperimentConfig& cfg, const std::filesystem::path& policy_path,
                        const std::filesystem::path& out_dir, std::ostream& log) {
    cfg.validate();
    if (cfg.model != "inventory")
        throw ConfigError(
            "simulate requires experiment.model = inventory (the gated queue is validated "
            "per cycle, not by trace rollout)");
    const io::PolicyFile pf = io::read_policy_csv(policy_path);
    if (!pf.policy.window.contains(cfg.sim.x0))
        throw ConfigError("sim.x0 = " + std::to_string(cfg.sim.x0) +
                          " is outside the policy window [" +
                          std::to_string(pf.policy.window.lo) + ", " +
                          std::to_string(pf.policy.window.hi) + "]");

    const InventoryParams p = cfg.inventory_params();
    const SimTrace tr = simulate_inventory(cfg.sim.x0, pf.policy, cfg.sim.horizon,
                                           detail::substream_seed(cfg.sim.seed, 0), p);
    const RolloutEstimate est = estimate_value(cfg.sim.x0, pf.policy, cfg.sim.n_rollouts,
                                               cfg.sim.horizon, cfg.sim.seed, p);

    std::filesystem::create_directories(out_dir);
    io::write_trace_csv(out_dir / "trace.csv", tr);
    io::write_estimate_json(out_dir / "estimate.json",
                            io::EstimateFile{est, cfg.sim.x0, cfg.sim.seed});
    log << "simulate: x0 " << cfg.sim.x0 << ", trace cost "
        << io::format_double(tr.discounted_cost) << ", estimate "
        << io::format_double(est.mean) << " +- " << io::format_double(est.std_error) << "\n";
    log << "wrote " << (out_dir / "trace.csv").string() << ", "
        << (out_dir / "estimate.json").string() << "\n";
    return 0;
}

// One solve per value of a numeric config key; each row reports the anchor
// state (theta for inventory, 0 for the queue). A failed point becomes a nan
// row and the sweep continues.
inline int cmd_sweep(const ExperimentConfig& cfg, const std::string& key,
                     const std::vector<double>& values, const std::filesystem::path& out_dir,
                     std::ostream& log) {
    cfg.validate();
    if (values.empty()) throw ConfigError("sweep: need at least one value");
    {
        ExperimentConfig probe = cfg;  // unknown / non-numeric key fails fast
        apply_numeric_key(probe, key, values.front());
    }

    std::vector<io::SweepRow> rows;
    for (double val : values) {
        io::SweepRow row;
        row.value = val;
        try {
            ExperimentConfig point = cfg;
            apply_numeric_key(point, key, val);
            point.validate();
            const detail::SolveArtifacts art = detail::solve_configured(point);
            const std::int64_t anchor =
                point.model == "inventory" ? point.inventory.theta : 0;
            row.v_star = art.v.at(anchor);
            row.t_star = art.policy.at(anchor).T;
            row.a_star_min = std::numeric_limits<double>::infinity();
            row.a_star_max = -std::numeric_limits<double>::infinity();
            for (const PolicyEntry& e : art.policy.entries) {
                row.a_star_min = std::min(row.a_star_min, e.a);
                row.a_star_max = std::max(row.a_star_max, e.a);
            }
            log << "sweep: " << key << " = " << io::format_double(val) << " -> v_star "
                << io::format_double(row.v_star) << ", t_star "
                << io::format_double(row.t_star) << "\n";
        } catch (const std::exception& e) {
            const double nan = std::nan("");
            row.v_star = row.t_star = row.a_star_min = row.a_star_max = nan;
            log << "sweep: " << key << " = " << io::format_double(val)
                << " failed: " << e.what() << "\n";
        }
        rows.push_back(row);
    }

    std::filesystem::create_directories(out_dir);
    io::write_sweep_csv(out_dir / "sweep.csv", rows);
    log << "wrote " << (out_dir / "sweep.csv").string() << "\n";
    return 0;
}

}  // namespace obsmdp
