#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "obsmdp/detail/optim.hpp"
#include "obsmdp/dp.hpp"
#include "obsmdp/kernels.hpp"
#include "obsmdp/value_table.hpp"

namespace obsmdp {

struct QueueParams {
    double lambda = 1.0;        // Poisson arrival rate
    double eta = 1.0;           // linear server-speed cost coefficient
    double beta = 0.8;          // discount base
    double T_min = 2.0;
    double T_max = 12.0;
    std::string g_kind = "inverse";  // "inverse": kappa_g / T, "linear": -kappa_g * T
    double kappa_g = 5.0;
    std::int64_t n_trunc = 64;  // state space / Poisson truncation 0..n_trunc

    double g(double T) const {
        return g_kind == "inverse" ? kappa_g / T : -kappa_g * T;
    }

    void validate() const {
        if (!(lambda > 0.0)) throw std::invalid_argument("queue.lambda must be > 0");
        if (!(eta > 0.0)) throw std::invalid_argument("queue.eta must be > 0");
        if (!(beta > 0.0 && beta < 1.0))
            throw std::invalid_argument("queue.beta must be in (0,1)");
        if (!(T_min > 0.0 && T_min <= T_max))
            throw std::invalid_argument("queue.t_min must satisfy 0 < t_min <= t_max");
        if (g_kind != "inverse" && g_kind != "linear")
            throw std::invalid_argument("queue.g_kind must be \"inverse\" or \"linear\"");
        if (!(kappa_g >= 0.0)) throw std::invalid_argument("queue.kappa_g must be >= 0");
        // the epoch sum truncates at n_trunc; require tail mass < 1e-10 at the
        // largest possible arrival mean
        const std::int64_t need = poisson_cutoff(lambda * T_max, 1e-10);
        if (n_trunc < need)
            throw std::invalid_argument("queue.n_trunc too small for lambda * t_max (need >= " +
                                        std::to_string(need) + ")");
    }
};

// argmin_a (x^2 + x)/(2a) + eta a  =  sqrt(x(x+1)/(2 eta)); zero customers
// need no service.
inline double optimal_speed(std::int64_t x, double eta) {
    if (x < 0) throw std::domain_error("optimal_speed: x must be >= 0");
    if (!(eta > 0.0)) throw std::domain_error("optimal_speed: eta must be > 0");
    const double xx = static_cast<double>(x);
    return std::sqrt(xx * (xx + 1.0) / (2.0 * eta));
}

// the objective value at optimal_speed: sqrt(2 eta x(x+1))
inline double optimal_speed_cost(std::int64_t x, double eta) {
    if (x < 0) throw std::domain_error("optimal_speed_cost: x must be >= 0");
    if (!(eta > 0.0)) throw std::domain_error("optimal_speed_cost: eta must be > 0");
    const double xx = static_cast<double>(x);
    return std::sqrt(2.0 * eta * xx * (xx + 1.0));
}

// lambda T^2/2 (arrivals wait half a cycle on average) plus the gated service
// backlog 1/a + 2/a + ... + x/a.
inline double expected_cycle_waiting_cost(std::int64_t x, double a, double T,
                                          const QueueParams& p) {
    if (x < 0) throw std::domain_error("expected_cycle_waiting_cost: x must be >= 0");
    if (T < 0.0) throw std::domain_error("expected_cycle_waiting_cost: T must be >= 0");
    if (x > 0 && !(a > 0.0))
        throw std::domain_error("expected_cycle_waiting_cost: a must be > 0 when x > 0");
    const double xx = static_cast<double>(x);
    const double backlog = x > 0 ? xx * (xx + 1.0) / (2.0 * a) : 0.0;
    return p.lambda * T * T / 2.0 + backlog;
}

// P(serving x customers at speed a takes longer than t): Erlang(x, a) tail,
// i.e. P(Poisson(a t) < x). Diagnostic for the moderate-load assumption.
inline double service_overrun_probability(std::int64_t x, double a, double t) {
    if (x <= 0) return 0.0;
    if (!(a > 0.0)) return 1.0;
    double s = 0.0;
    for (std::int64_t k = 0; k < x; ++k) s += poisson_pmf(k, a * t);
    return std::min(1.0, s);
}

namespace detail {

// Poisson(mean) pmf on 0..n, plus the retained mass.
struct TruncatedPmf {
    std::vector<double> probs;
    double retained = 0.0;
};

inline TruncatedPmf poisson_prefix(double mean, std::int64_t n) {
    TruncatedPmf out;
    out.probs.resize(static_cast<std::size_t>(n + 1));
    for (std::int64_t k = 0; k <= n; ++k) {
        const double q = poisson_pmf(k, mean);
        out.probs[static_cast<std::size_t>(k)] = q;
        out.retained += q;
    }
    return out;
}

}  // namespace detail

// One observation epoch with the state-dependent part factored out:
// lambda T^2/2 + g(T) + beta^T (sum_k pmf(k; lambda T) r*(k) + W retained).
inline double epoch_objective(double T, double W, const QueueParams& p) {
    const detail::TruncatedPmf pmf = detail::poisson_prefix(p.lambda * T, p.n_trunc);
    double tail = 0.0;
    for (std::int64_t k = 0; k <= p.n_trunc; ++k)
        tail += pmf.probs[static_cast<std::size_t>(k)] * optimal_speed_cost(k, p.eta);
    return p.lambda * T * T / 2.0 + p.g(T) +
           std::pow(p.beta, T) * (tail + W * pmf.retained);
}

struct EpochFixedPoint {
    double W_star = 0.0;
    double T_star = 0.0;
    std::vector<double> residual_history;
};

namespace detail {

// min over T in [T_min, T_max]: 201-point grid scan (strict <, so ties pick
// the smallest T) plus golden-section within one grid cell, accepted only on
// strict improvement.
template <class F>
std::pair<double, double> min_over_interval(F&& f, double lo, double hi) {
    constexpr int n = 201;
    double t_best = lo, v_best = f(lo);
    for (int j = 1; j < n; ++j) {
        const double t = lo + (hi - lo) * static_cast<double>(j) / (n - 1);
        const double val = f(t);
        if (val < v_best) {
            v_best = val;
            t_best = t;
        }
    }
    const double h = (hi - lo) / (n - 1);
    const auto r = golden_min(f, std::max(lo, t_best - h), std::min(hi, t_best + h), 1e-9);
    if (r.value < v_best) return {r.arg, r.value};
    return {t_best, v_best};
}

}  // namespace detail

inline EpochFixedPoint solve_epoch_fixed_point(const QueueParams& p, double eps,
                                               int max_iter = 1000) {
    p.validate();
    if (!(eps > 0.0)) throw std::invalid_argument("solve_epoch_fixed_point: eps must be > 0");
    EpochFixedPoint out;
    double W = 0.0;
    for (int k = 0; k < max_iter; ++k) {
        const double next = detail::min_over_interval(
                                [&](double T) { return epoch_objective(T, W, p); }, p.T_min,
                                p.T_max)
                                .second;
        const double res = std::fabs(next - W);
        out.residual_history.push_back(res);
        W = next;
        if (res <= eps) {
            out.W_star = W;
            // report the minimizer at the converged W, not at the last iterate
            out.T_star = detail::min_over_interval(
                             [&](double T) { return epoch_objective(T, W, p); }, p.T_min,
                             p.T_max)
                             .first;
            return out;
        }
    }
    throw std::runtime_error("solve_epoch_fixed_point: no convergence after " +
                             std::to_string(max_iter) + " iterations (last residual " +
                             std::to_string(out.residual_history.back()) + ")");
}

// v(x) = r*(x) + W*: the epoch part is state-independent.
inline double value(std::int64_t x, const QueueParams& p, double W_star) {
    return optimal_speed_cost(x, p.eta) + W_star;
}

// The same model shaped for the generic engine: states 0..n_trunc, action =
// server speed (closed-form inner minimum), interval from a shared line
// search. The search sees only state-independent terms, so every state walks
// the identical T trajectory - T* comes out bitwise-constant across x.
class GatedQueueModel {
  public:
    explicit GatedQueueModel(QueueParams p) : p_(std::move(p)) {
        p_.validate();
        const detail::TruncatedPmf worst = detail::poisson_prefix(p_.lambda * p_.T_max,
                                                                  p_.n_trunc);
        escape_ = std::max(0.0, 1.0 - worst.retained);
    }

    const QueueParams& params() const { return p_; }

    Window state_window() const { return {0, p_.n_trunc}; }
    double discount_base() const { return p_.beta; }
    double min_interval() const { return p_.T_min; }
    Direction direction() const { return Direction::minimize; }
    double truncation_eps() const { return 1e-10; }
    double escape_mass_bound() const { return escape_; }

    StageResult stage_value(std::int64_t x, const ValueTable& v) const {
        const auto epoch = [&](double T) {
            const detail::TruncatedPmf pmf = detail::poisson_prefix(p_.lambda * T, p_.n_trunc);
            double dot = 0.0;
            for (std::int64_t k = 0; k <= p_.n_trunc; ++k)
                dot += pmf.probs[static_cast<std::size_t>(k)] * v.clamped(k);
            return p_.lambda * T * T / 2.0 + p_.g(T) + std::pow(p_.beta, T) * dot;
        };
        const auto [t_star, epoch_val] = detail::min_over_interval(epoch, p_.T_min, p_.T_max);
        return {optimal_speed(x, p_.eta), t_star, optimal_speed_cost(x, p_.eta) + epoch_val};
    }

  private:
    QueueParams p_;
    double escape_ = 0.0;
};

}  // namespace obsmdp
