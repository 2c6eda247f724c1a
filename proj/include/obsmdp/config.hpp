#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "obsmdp/gated_queue.hpp"
#include "obsmdp/inventory.hpp"

namespace obsmdp {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct SolverConfig {
    double eps_vi = 1e-6;
    int max_iter = 1000;
    int grid_a = 41;
    int grid_t = 41;
    std::int64_t window_margin = 30;
};

struct SimConfig {
    std::int64_t n_rollouts = 10000;
    double horizon = 60.0;
    std::uint64_t seed = 1;
    std::int64_t x0 = 8;
};

struct ExperimentConfig {
    std::string model = "inventory";
    std::string out_dir = "out";
    InventoryParams inventory;
    QueueParams queue;
    SolverConfig solver;
    SimConfig sim;

    // Inventory params as the solver consumes them: the sweep tolerance lives
    // in [solver], not [inventory].
    InventoryParams inventory_params() const {
        InventoryParams p = inventory;
        p.eps_vi = solver.eps_vi;
        return p;
    }

    InventorySolverOptions solver_options() const {
        InventorySolverOptions opt;
        opt.window_margin = solver.window_margin;
        opt.grid_a = solver.grid_a;
        opt.grid_t = solver.grid_t;
        return opt;
    }

    void validate() const {
        if (model != "inventory" && model != "gated-queue")
            throw ConfigError("experiment.model must be \"inventory\" or \"gated-queue\"");
        if (!(solver.eps_vi > 0.0)) throw ConfigError("solver.eps_vi must be > 0");
        if (solver.max_iter < 1) throw ConfigError("solver.max_iter must be >= 1");
        if (solver.grid_a < 2 || solver.grid_t < 2)
            throw ConfigError("solver.grid_a/grid_t must be >= 2");
        if (solver.window_margin < 1) throw ConfigError("solver.window_margin must be >= 1");
        if (sim.n_rollouts < 2) throw ConfigError("sim.n_rollouts must be >= 2");
        if (!(sim.horizon > 0.0)) throw ConfigError("sim.horizon must be > 0");
        try {
            if (model == "inventory")
                inventory_params().validate();
            else
                queue.validate();
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
    }
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
    T out{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ConfigError("config key " + key + ": cannot parse \"" + text + "\" as a number");
    return out;
}

}  // namespace detail

// Flat key = value sections. Full-line comments start with '#' or ';';
// unknown sections and keys are rejected so typos cannot silently fall back
// to defaults.
inline ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": malformed section header \"" + t + "\"");
            section = detail::trim(std::string_view(t).substr(1, t.size() - 2));
            if (section != "experiment" && section != "inventory" && section != "queue" &&
                section != "solver" && section != "sim")
                throw ConfigError("unknown config section: [" + section + "]");
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected key = value, got \"" + t + "\"");
        const std::string key = detail::trim(std::string_view(t).substr(0, eq));
        const std::string value = detail::trim(std::string_view(t).substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": empty key or value");
        const std::string full = section.empty() ? key : section + "." + key;

        using detail::parse_number;
        if (full == "experiment.model") cfg.model = value;
        else if (full == "experiment.out_dir") cfg.out_dir = value;
        else if (full == "inventory.theta") cfg.inventory.theta = parse_number<std::int64_t>(full, value);
        else if (full == "inventory.mu") cfg.inventory.mu = parse_number<double>(full, value);
        else if (full == "inventory.nu") cfg.inventory.nu = parse_number<double>(full, value);
        else if (full == "inventory.kappa") cfg.inventory.kappa = parse_number<double>(full, value);
        else if (full == "inventory.beta") cfg.inventory.beta = parse_number<double>(full, value);
        else if (full == "inventory.a_max") cfg.inventory.a_max = parse_number<double>(full, value);
        else if (full == "inventory.t_min") cfg.inventory.T_min = parse_number<double>(full, value);
        else if (full == "inventory.t_max") cfg.inventory.T_max = parse_number<double>(full, value);
        else if (full == "inventory.eps_kernel") cfg.inventory.eps_kernel = parse_number<double>(full, value);
        else if (full == "queue.lambda") cfg.queue.lambda = parse_number<double>(full, value);
        else if (full == "queue.eta") cfg.queue.eta = parse_number<double>(full, value);
        else if (full == "queue.beta") cfg.queue.beta = parse_number<double>(full, value);
        else if (full == "queue.t_min") cfg.queue.T_min = parse_number<double>(full, value);
        else if (full == "queue.t_max") cfg.queue.T_max = parse_number<double>(full, value);
        else if (full == "queue.g_kind") cfg.queue.g_kind = value;
        else if (full == "queue.kappa_g") cfg.queue.kappa_g = parse_number<double>(full, value);
        else if (full == "queue.n_trunc") cfg.queue.n_trunc = parse_number<std::int64_t>(full, value);
        else if (full == "solver.eps_vi") cfg.solver.eps_vi = parse_number<double>(full, value);
        else if (full == "solver.max_iter") cfg.solver.max_iter = parse_number<int>(full, value);
        else if (full == "solver.grid_a") cfg.solver.grid_a = parse_number<int>(full, value);
        else if (full == "solver.grid_t") cfg.solver.grid_t = parse_number<int>(full, value);
        else if (full == "solver.window_margin") cfg.solver.window_margin = parse_number<std::int64_t>(full, value);
        else if (full == "sim.n_rollouts") cfg.sim.n_rollouts = parse_number<std::int64_t>(full, value);
        else if (full == "sim.horizon") cfg.sim.horizon = parse_number<double>(full, value);
        else if (full == "sim.seed") cfg.sim.seed = parse_number<std::uint64_t>(full, value);
        else if (full == "sim.x0") cfg.sim.x0 = parse_number<std::int64_t>(full, value);
        else throw ConfigError("unknown config key: " + full);
    }
    return cfg;
}

inline ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

// Overwrite one numeric key on an already-parsed config (sweep plumbing).
// Integer-typed keys require an integral value.
inline void apply_numeric_key(ExperimentConfig& cfg, const std::string& key, double value) {
    const auto as_int = [&](std::int64_t lo) {
        const auto iv = static_cast<std::int64_t>(value);
        if (static_cast<double>(iv) != value || iv < lo)
            throw ConfigError("sweep key " + key + ": value must be an integer >= " +
                              std::to_string(lo));
        return iv;
    };
    if (key == "inventory.theta") cfg.inventory.theta = as_int(INT64_MIN);
    else if (key == "inventory.mu") cfg.inventory.mu = value;
    else if (key == "inventory.nu") cfg.inventory.nu = value;
    else if (key == "inventory.kappa") cfg.inventory.kappa = value;
    else if (key == "inventory.beta") cfg.inventory.beta = value;
    else if (key == "inventory.a_max") cfg.inventory.a_max = value;
    else if (key == "inventory.t_min") cfg.inventory.T_min = value;
    else if (key == "inventory.t_max") cfg.inventory.T_max = value;
    else if (key == "inventory.eps_kernel") cfg.inventory.eps_kernel = value;
    else if (key == "queue.lambda") cfg.queue.lambda = value;
    else if (key == "queue.eta") cfg.queue.eta = value;
    else if (key == "queue.beta") cfg.queue.beta = value;
    else if (key == "queue.t_min") cfg.queue.T_min = value;
    else if (key == "queue.t_max") cfg.queue.T_max = value;
    else if (key == "queue.kappa_g") cfg.queue.kappa_g = value;
    else if (key == "queue.n_trunc") cfg.queue.n_trunc = as_int(1);
    else if (key == "solver.eps_vi") cfg.solver.eps_vi = value;
    else if (key == "solver.max_iter") cfg.solver.max_iter = static_cast<int>(as_int(1));
    else if (key == "solver.grid_a") cfg.solver.grid_a = static_cast<int>(as_int(2));
    else if (key == "solver.grid_t") cfg.solver.grid_t = static_cast<int>(as_int(2));
    else if (key == "solver.window_margin") cfg.solver.window_margin = as_int(1);
    else if (key == "sim.n_rollouts") cfg.sim.n_rollouts = as_int(2);
    else if (key == "sim.horizon") cfg.sim.horizon = value;
    else if (key == "sim.x0") cfg.sim.x0 = as_int(INT64_MIN);
    else throw ConfigError("sweep key " + key + " is not a numeric config key");
}

// Built-in experiment presets; the files under presets/ carry the same bytes
// for use outside the binary.
inline const char* preset_text(std::string_view name) {
    if (name == "paper-v-c")
        return R"(# Inventory case study: quadratic deviation cost around a target level,
# bounded order rate, linear observation reward.
[experiment]
model = inventory
out_dir = out

[inventory]
theta = 8
mu = 2
nu = 2
kappa = 5
beta = 0.8
a_max = 5
t_min = 2
t_max = 12
eps_kernel = 1e-9

[solver]
eps_vi = 1e-6
max_iter = 1000
grid_a = 41
grid_t = 41
window_margin = 30

[sim]
n_rollouts = 10000
horizon = 60
seed = 20240801
x0 = 16
)";
    if (name == "gated-default")
        return R"(# Gated service queue: Poisson arrivals held at a gate, square-root service
# speed rule, inverse observation cost.
[experiment]
model = gated-queue
out_dir = out

[queue]
lambda = 1
eta = 1
beta = 0.8
t_min = 2
t_max = 12
g_kind = inverse
kappa_g = 5
n_trunc = 64

[solver]
eps_vi = 1e-6
max_iter = 1000
)";
    return nullptr;
}

inline ExperimentConfig load_preset(const std::string& name) {
    const char* text = preset_text(name);
    if (!text)
        throw ConfigError("unknown preset \"" + name +
                          "\" (available: paper-v-c, gated-default)");
    return parse_config(text);
}

}  // namespace obsmdp
