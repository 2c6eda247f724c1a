#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "obsmdp/detail/parallel.hpp"
#include "obsmdp/kernels.hpp"
#include "obsmdp/value_table.hpp"

namespace obsmdp {

// Bellman sum over one kernel row; destinations outside the window are
// clamped to the nearest edge state.
inline double kernel_dot(const KernelRow& row, const ValueTable& v) {
    double s = 0.0;
    std::int64_t dest = row.lo;
    for (double p : row.probs) s += p * v.clamped(dest++);
    return s;
}

enum class Direction { minimize, maximize };

struct StageResult {
    double a = 0.0;
    double T = 0.0;
    double value = 0.0;
};

// A model plugs in the per-state inner optimization over (action, interval);
// the engine only sequences Bellman sweeps. stage_value must be a pure
// function of (x, v) — sweeps call it concurrently.
template <class M>
concept ObservationModel = requires(const M& m, std::int64_t x, const ValueTable& v) {
    { m.state_window() } -> std::convertible_to<Window>;
    { m.discount_base() } -> std::convertible_to<double>;
    { m.min_interval() } -> std::convertible_to<double>;
    { m.direction() } -> std::convertible_to<Direction>;
    { m.truncation_eps() } -> std::convertible_to<double>;
    { m.escape_mass_bound() } -> std::convertible_to<double>;
    { m.stage_value(x, v) } -> std::convertible_to<StageResult>;
};

class SolveError : public std::runtime_error {
  public:
    SolveError(const std::string& what, ValueTable partial, double last_residual)
        : std::runtime_error(what),
          partial_result(std::move(partial)),
          last_residual(last_residual) {}

    ValueTable partial_result;
    double last_residual;
};

template <ObservationModel M>
ValueTable bellman_update(const M& model, const ValueTable& v) {
    const Window w = model.state_window();
    if (v.window != w) throw std::invalid_argument("bellman_update: window mismatch");
    ValueTable out(w);
    out.iteration_count = v.iteration_count + 1;
    out.residual_history = v.residual_history;
    std::vector<std::string> failures(w.size());
    detail::parallel_for(w.size(), [&](std::size_t i) {
        const std::int64_t x = w.state(i);
        try {
            out.values[i] = model.stage_value(x, v).value;
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < w.size(); ++i)
        if (!failures[i].empty())
            throw std::runtime_error("bellman_update: stage optimizer failed at state " +
                                     std::to_string(w.state(i)) + ": " + failures[i]);
    return out;
}

template <ObservationModel M>
StagePolicy extract_policy(const M& model, const ValueTable& v_star) {
    const Window w = model.state_window();
    StagePolicy pol;
    pol.window = w;
    pol.entries.resize(w.size());
    detail::parallel_for(w.size(), [&](std::size_t i) {
        const std::int64_t x = w.state(i);
        const StageResult r = model.stage_value(x, v_star);
        pol.entries[i] = PolicyEntry{x, r.a, r.T, r.value};
    });
    return pol;
}

struct VIResult {
    ValueTable v;
    StagePolicy policy;
};

template <ObservationModel M>
VIResult value_iteration(const M& model, ValueTable v0, double eps, int max_iter) {
    if (!(eps > 0.0)) throw std::invalid_argument("value_iteration: eps must be > 0");
    ValueTable v = std::move(v0);
    for (int k = 0; k < max_iter; ++k) {
        ValueTable next = bellman_update(model, v);
        const double res = sup_norm_diff(next, v);
        next.residual_history.push_back(res);
        v = std::move(next);
        if (res <= eps) return VIResult{v, extract_policy(model, v)};
    }
    const double last = v.residual_history.empty() ? std::nan("") : v.residual_history.back();
    throw SolveError("value_iteration: no convergence after " + std::to_string(max_iter) +
                         " iterations (last residual " + std::to_string(last) + ")",
                     std::move(v), last);
}

// Upper bound on |reported - exact| value from (a) per-stage kernel mass lost
// to truncation and (b) transitions clamped to the window edge, accumulated
// over the horizon by the geometric series with ratio beta^{T_min}.
template <ObservationModel M>
double truncation_error_bound(const M& model, const ValueTable& v) {
    const double gamma = std::pow(model.discount_base(), model.min_interval());
    const double sup = v.sup_abs();
    const double per_stage =
        model.truncation_eps() * sup + 2.0 * model.escape_mass_bound() * sup;
    return per_stage / (1.0 - gamma);
}

}  // namespace obsmdp
