#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "obsmdp/detail/parallel.hpp"
#include "obsmdp/detail/rng.hpp"
#include "obsmdp/gated_queue.hpp"
#include "obsmdp/inventory.hpp"
#include "obsmdp/value_table.hpp"

namespace obsmdp {

enum class EventKind { arrival, departure, observation };

struct SimEvent {
    double time = 0.0;
    EventKind kind = EventKind::observation;
    std::int64_t state = 0;  // state after the event
};

struct Observation {
    double time = 0.0;
    std::int64_t state = 0;  // observed (pre-decision) state
    double a = 0.0;
    double T = 0.0;
};

struct SimTrace {
    std::vector<SimEvent> events;
    std::vector<Observation> observations;
    double discounted_cost = 0.0;
    std::uint64_t seed = 0;
    // thinning bookkeeping: arrival candidates offered at rate a_max and the
    // subset accepted at the scheduled rate
    std::int64_t thin_candidates = 0;
    std::int64_t thin_accepted = 0;
};

// One rollout of the inventory process under a stage policy: departures at
// rate mu and arrivals thinned from rate a_max candidates, with the running
// cost integrated exactly over each constant segment and g paid at every
// observation epoch before the horizon.
inline SimTrace simulate_inventory(std::int64_t x0, const StagePolicy& policy, double horizon,
                                   std::uint64_t seed, const InventoryParams& p) {
    if (!(horizon > 0.0))
        throw std::invalid_argument("simulate_inventory: horizon must be > 0");
    p.validate();
    detail::SplitMix64 rng(seed);
    SimTrace tr;
    tr.seed = seed;

    const double log_beta = std::log(p.beta);
    const auto seg_disc = [&](double s, double e) {  // integral of beta^t over [s, e]
        return (std::exp(log_beta * e) - std::exp(log_beta * s)) / log_beta;
    };

    const double cand_rate = p.a_max + p.mu;
    double t = 0.0;
    std::int64_t x = x0;
    double cost = 0.0;
    while (t < horizon) {
        const PolicyEntry& e = policy.clamped(x);
        const double a = e.a, T = e.T;
        if (!(T > 0.0))
            throw std::invalid_argument("simulate_inventory: policy interval must be > 0");
        if (!(a >= 0.0 && a <= p.a_max))
            throw std::invalid_argument("simulate_inventory: policy rate outside [0, a_max]");
        tr.observations.push_back({t, x, a, T});
        tr.events.push_back({t, EventKind::observation, x});
        cost += std::exp(log_beta * t) * p.g(T);

        const double t_end = std::min(t + T, horizon);
        double seg_start = t;  // start of the current constant-state stretch
        double cand = t;
        while (true) {
            cand += rng.exponential(cand_rate);
            if (cand >= t_end) break;
            const bool departure = rng.uniform() < p.mu / cand_rate;
            if (departure) {
                const double dev = static_cast<double>(x - p.theta);
                cost += (dev * dev + p.nu * a) * seg_disc(seg_start, cand);
                --x;
                tr.events.push_back({cand, EventKind::departure, x});
                seg_start = cand;
            } else {
                ++tr.thin_candidates;
                if (rng.uniform() < a / p.a_max) {
                    ++tr.thin_accepted;
                    const double dev = static_cast<double>(x - p.theta);
                    cost += (dev * dev + p.nu * a) * seg_disc(seg_start, cand);
                    ++x;
                    tr.events.push_back({cand, EventKind::arrival, x});
                    seg_start = cand;
                }
            }
        }
        const double dev = static_cast<double>(x - p.theta);
        cost += (dev * dev + p.nu * a) * seg_disc(seg_start, t_end);
        t += T;
    }
    tr.discounted_cost = cost;
    return tr;
}

struct CycleResult {
    double waiting_sum = 0.0;
    std::int64_t n_new_arrivals = 0;
};

// One gated cycle: new arrivals land uniformly and wait for the gate; the
// x_prev customers already inside are served in order at speed a with
// exponential service times, each waiting until its own completion.
inline CycleResult simulate_gated_cycle(std::int64_t x_prev, double a, double T,
                                        std::uint64_t seed, const QueueParams& p) {
    if (x_prev < 0) throw std::domain_error("simulate_gated_cycle: x_prev must be >= 0");
    if (T < 0.0) throw std::domain_error("simulate_gated_cycle: T must be >= 0");
    if (x_prev > 0 && !(a > 0.0))
        throw std::domain_error("simulate_gated_cycle: a must be > 0 when customers wait");
    detail::SplitMix64 rng(seed);
    CycleResult out;
    out.n_new_arrivals = rng.poisson(p.lambda * T);
    for (std::int64_t i = 0; i < out.n_new_arrivals; ++i)
        out.waiting_sum += T - rng.uniform() * T;
    double clock = 0.0;
    for (std::int64_t i = 0; i < x_prev; ++i) {
        clock += rng.exponential(a);
        out.waiting_sum += clock;
    }
    return out;
}

struct RolloutEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t n_rollouts = 0;
    double horizon = 0.0;
    double truncation_bound = 0.0;
};

namespace detail {

// Fixed reduction tree: the sum depends only on element order, never on how
// rollouts were scheduled across threads.
inline double pairwise_sum(const double* xs, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += xs[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(xs, half) + pairwise_sum(xs + half, n - half);
}

}  // namespace detail

// Sample mean/standard error of the discounted cost over independent
// rollouts, plus an auditable bound on what the finite horizon discards:
// beta^H * (one-epoch running-cost envelope) / (1 - beta^T_min). The envelope
// takes the worst window state pushed by the extreme drift for a full T_max.
inline RolloutEstimate estimate_value(std::int64_t x0, const StagePolicy& policy,
                                      std::int64_t n_rollouts, double horizon,
                                      std::uint64_t seed, const InventoryParams& p) {
    if (n_rollouts < 2)
        throw std::invalid_argument("estimate_value: n_rollouts must be >= 2");
    // validate before fanning out: a throw inside a worker thread would abort
    if (!(horizon > 0.0))
        throw std::invalid_argument("estimate_value: horizon must be > 0");
    p.validate();
    for (const PolicyEntry& e : policy.entries) {
        if (!(e.T > 0.0))
            throw std::invalid_argument("estimate_value: policy interval must be > 0");
        if (!(e.a >= 0.0 && e.a <= p.a_max))
            throw std::invalid_argument("estimate_value: policy rate outside [0, a_max]");
    }
    std::vector<double> costs(static_cast<std::size_t>(n_rollouts));
    detail::parallel_for(costs.size(), [&](std::size_t i) {
        costs[i] = simulate_inventory(x0, policy, horizon, detail::substream_seed(seed, i), p)
                       .discounted_cost;
    });
    RolloutEstimate est;
    est.n_rollouts = n_rollouts;
    est.horizon = horizon;
    const double n = static_cast<double>(n_rollouts);
    est.mean = detail::pairwise_sum(costs.data(), costs.size()) / n;
    std::vector<double> sq(costs.size());
    for (std::size_t i = 0; i < costs.size(); ++i)
        sq[i] = (costs[i] - est.mean) * (costs[i] - est.mean);
    est.std_error = std::sqrt(detail::pairwise_sum(sq.data(), sq.size()) / (n * (n - 1.0)));

    const double d_edge =
        static_cast<double>(std::max(std::llabs(policy.window.lo - p.theta),
                                     std::llabs(policy.window.hi - p.theta)));
    const double reach = d_edge + (p.a_max + p.mu) * p.T_max;
    const double dk0 = discount_integrals(p.T_max, p.beta).dK0;
    const double epoch_bound =
        (reach * reach + (p.a_max + p.mu) * p.T_max + p.nu * p.a_max) * dk0 +
        std::max(std::fabs(p.g(p.T_min)), std::fabs(p.g(p.T_max)));
    est.truncation_bound = std::pow(p.beta, horizon) * epoch_bound /
                           (1.0 - std::pow(p.beta, p.T_min));
    return est;
}

}  // namespace obsmdp
