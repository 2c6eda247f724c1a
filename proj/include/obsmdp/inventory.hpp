#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "obsmdp/detail/optim.hpp"
#include "obsmdp/dp.hpp"
#include "obsmdp/kernels.hpp"
#include "obsmdp/value_table.hpp"

namespace obsmdp {

struct InventoryParams {
    std::int64_t theta = 8;   // target inventory level
    double mu = 2.0;          // departure rate
    double nu = 2.0;          // acceleration cost coefficient
    double kappa = 5.0;       // observation cost coefficient, g(T) = -kappa*T
    double beta = 0.8;        // discount base
    double a_max = 5.0;       // arrival-rate upper bound
    double T_min = 2.0;
    double T_max = 12.0;
    double eps_kernel = 1e-9;
    double eps_vi = 1e-6;

    double g(double T) const { return -kappa * T; }

    void validate() const {
        if (!(mu >= 0.0)) throw std::invalid_argument("inventory.mu must be >= 0");
        if (!(nu >= 0.0)) throw std::invalid_argument("inventory.nu must be >= 0");
        if (!(kappa >= 0.0)) throw std::invalid_argument("inventory.kappa must be >= 0");
        if (!(beta > 0.0 && beta < 1.0))
            throw std::invalid_argument("inventory.beta must be in (0,1)");
        if (!(T_min > 0.0 && T_min <= T_max))
            throw std::invalid_argument("inventory.t_min must satisfy 0 < t_min <= t_max");
        if (!(a_max > 0.0)) throw std::invalid_argument("inventory.a_max must be > 0");
        if (!(eps_kernel > 0.0 && eps_kernel < 1.0))
            throw std::invalid_argument("inventory.eps_kernel must be in (0,1)");
        if (!(eps_vi > 0.0)) throw std::invalid_argument("inventory.eps_vi must be > 0");
    }
};

// Piecewise-constant arrival rate on [0, T] and its cumulative function
// abar(t) — the integrator state y(t) of the inner control problem.
struct RateSchedule {
    std::vector<double> breakpoints;  // 0 = t0 <= ... <= tn = T
    std::vector<double> levels;       // levels[i] applies on [t_i, t_{i+1})

    static RateSchedule constant(double a, double T) {
        RateSchedule s;
        s.breakpoints = {0.0, T};
        s.levels = {a};
        return s;
    }

    double horizon() const { return breakpoints.back(); }

    double rate_at(double t) const {
        for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
            if (t < breakpoints[i + 1]) return levels[i];
        return levels.back();
    }

    // abar(t): piecewise linear, abar(0) = 0, slope = current level
    double cum(double t) const {
        double y = 0.0;
        for (std::size_t i = 0; i < levels.size(); ++i) {
            const double t0 = breakpoints[i], t1 = breakpoints[i + 1];
            if (t <= t0) break;
            y += levels[i] * (std::min(t, t1) - t0);
        }
        return y;
    }

    void validate(double a_max) const {
        if (breakpoints.size() < 2 || levels.size() + 1 != breakpoints.size())
            throw std::invalid_argument("rate schedule: malformed breakpoints/levels");
        if (breakpoints.front() != 0.0)
            throw std::invalid_argument("rate schedule: must start at t = 0");
        for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
            if (!(breakpoints[i] <= breakpoints[i + 1]))
                throw std::invalid_argument("rate schedule: breakpoints must be sorted");
        for (double a : levels)
            if (!(a >= 0.0 && a <= a_max))
                throw std::invalid_argument("rate schedule: level outside [0, a_max]");
    }
};

// E[(X(t) - theta)^2] given X(0) = x: squared mean drift plus the accumulated
// variance of both Poisson streams.
inline double deviation_cost(std::int64_t x, double t, const RateSchedule& sched,
                             const InventoryParams& p) {
    const double drift = static_cast<double>(x - p.theta) + sched.cum(t) - p.mu * t;
    return drift * drift + (sched.cum(t) + p.mu * t);
}

namespace detail {

// Discounted running cost of a constant rate a over [0, T], as a polynomial
// in the dK integrals: integrand beta^t [(delta + (a-mu)t)^2 + (a+mu)t + nu a].
inline double running_cost_const(double a, double delta, const DiscountIntegrals& dk,
                                 const InventoryParams& p) {
    return a * a * dk.dK2 +
           a * ((2.0 * delta + 1.0) * dk.dK1 - 2.0 * p.mu * dk.dK2 + p.nu * dk.dK0) +
           delta * delta * dk.dK0 + p.mu * (1.0 - 2.0 * delta) * dk.dK1 +
           p.mu * p.mu * dk.dK2;
}

}  // namespace detail

// Stage objective F(a, T; x, v) for a constant rate: closed-form discounted
// running cost + beta^T * kernel continuation + g(T).
inline double stage_objective_const(double a, double T, std::int64_t x, const ValueTable& v,
                                    const InventoryParams& p) {
    const DiscountIntegrals dk = discount_integrals(T, p.beta);
    const double delta = static_cast<double>(x - p.theta);
    const double running = detail::running_cost_const(a, delta, dk, p);
    const KernelRow row = kernel_row(x, a * T, p.mu * T, p.eps_kernel);
    return running + std::pow(p.beta, T) * kernel_dot(row, v) + p.g(T);
}

struct InventorySolverOptions {
    std::int64_t window_margin = 30;
    int grid_a = 41;
    int grid_t = 41;
    double refine_tol = 1e-6;
    double refine_gap = 0.5;  // cells within this of the grid best get refined
    int refine_cap = 8;       // at most this many refinement starts
};

// The observation-MDP instance for the inventory study. Net-change kernel
// rows for the coarse (a, T) grid are cached once (x enters only as a shift);
// refinement evaluates the exact objective on the fly.
class InventoryModel {
  public:
    explicit InventoryModel(InventoryParams p, InventorySolverOptions opt = {})
        : p_(std::move(p)), opt_(opt) {
        p_.validate();
        if (opt_.grid_a < 2 || opt_.grid_t < 2)
            throw std::invalid_argument("solver.grid_a/grid_t must be >= 2");
        if (opt_.window_margin < 1)
            throw std::invalid_argument("solver.window_margin must be >= 1");
        window_ = Window{p_.theta - opt_.window_margin, p_.theta + opt_.window_margin};

        a_grid_.resize(static_cast<std::size_t>(opt_.grid_a));
        for (int i = 0; i < opt_.grid_a; ++i)
            a_grid_[static_cast<std::size_t>(i)] =
                p_.a_max * static_cast<double>(i) / static_cast<double>(opt_.grid_a - 1);
        t_grid_.resize(static_cast<std::size_t>(opt_.grid_t));
        for (int j = 0; j < opt_.grid_t; ++j)
            t_grid_[static_cast<std::size_t>(j)] =
                p_.T_min + (p_.T_max - p_.T_min) * static_cast<double>(j) /
                               static_cast<double>(opt_.grid_t - 1);

        cells_.resize(a_grid_.size() * t_grid_.size());
        detail::parallel_for(cells_.size(), [&](std::size_t idx) {
            const std::size_t j = idx / a_grid_.size();
            const std::size_t i = idx % a_grid_.size();
            const double a = a_grid_[i], T = t_grid_[j];
            Cell& c = cells_[idx];
            c.a = a;
            c.T = T;
            c.row0 = kernel_row(0, a * T, p_.mu * T, p_.eps_kernel);
            c.dk = discount_integrals(T, p_.beta);
            c.disc = std::pow(p_.beta, T);
            c.g = p_.g(T);
        });

        // Worst per-stage mass leaving the window from its center, over the
        // action grid; feeds truncation_error_bound.
        escape_ = 0.0;
        for (const Cell& c : cells_) {
            double esc = 0.0;
            std::int64_t d = c.row0.lo;
            for (double q : c.row0.probs) {
                if (d < -opt_.window_margin || d > opt_.window_margin) esc += q;
                ++d;
            }
            escape_ = std::max(escape_, esc);
        }
    }

    const InventoryParams& params() const { return p_; }
    const InventorySolverOptions& options() const { return opt_; }

    Window state_window() const { return window_; }
    double discount_base() const { return p_.beta; }
    double min_interval() const { return p_.T_min; }
    Direction direction() const { return Direction::minimize; }
    double truncation_eps() const { return p_.eps_kernel; }
    double escape_mass_bound() const { return escape_; }

    // Joint (a, T) minimization: coarse grid scan with the lexicographic
    // tie-break (smallest T first, then smallest a), then strictly-improving
    // golden-section refinement seeded at (0, T_max), at the best cell, and
    // at every near-best cell.
    StageResult stage_value(std::int64_t x, const ValueTable& v) const {
        const std::size_t na = a_grid_.size(), nt = t_grid_.size();
        std::vector<double> vals(na * nt);
        StageResult best;
        bool first = true;
        for (std::size_t j = 0; j < nt; ++j) {
            for (std::size_t i = 0; i < na; ++i) {
                const double val = cell_objective(cells_[j * na + i], x, v);
                if (!std::isfinite(val))
                    throw std::runtime_error(
                        "stage objective not finite at a=" + std::to_string(a_grid_[i]) +
                        " T=" + std::to_string(t_grid_[j]) + " x=" + std::to_string(x));
                vals[j * na + i] = val;
                if (first || val < best.value) {
                    best = StageResult{a_grid_[i], t_grid_[j], val};
                    first = false;
                }
            }
        }

        // refinement seeds: mandatory (0, T_max), then near-best grid cells
        std::vector<std::pair<double, double>> seeds;
        seeds.emplace_back(0.0, p_.T_max);
        std::vector<std::size_t> order;
        for (std::size_t idx = 0; idx < vals.size(); ++idx)
            if (vals[idx] <= best.value + opt_.refine_gap) order.push_back(idx);
        std::sort(order.begin(), order.end(), [&](std::size_t u, std::size_t w) {
            if (vals[u] != vals[w]) return vals[u] < vals[w];
            return u < w;
        });
        if (order.size() > static_cast<std::size_t>(opt_.refine_cap))
            order.resize(static_cast<std::size_t>(opt_.refine_cap));
        for (std::size_t idx : order)
            seeds.emplace_back(a_grid_[idx % na], t_grid_[idx / na]);

        const double da = a_grid_[1] - a_grid_[0];
        const double dt = nt > 1 ? t_grid_[1] - t_grid_[0] : 0.0;
        for (const auto& [a0, T0] : seeds) {
            const StageResult r = refine(x, v, a0, T0, da, dt);
            if (r.value < best.value) best = r;
        }
        return best;
    }

  private:
    struct Cell {
        double a = 0.0;
        double T = 0.0;
        KernelRow row0;
        DiscountIntegrals dk;
        double disc = 0.0;
        double g = 0.0;
    };

    // Identical assembly to stage_objective_const, with the per-cell parts
    // (row, dK, beta^T) looked up instead of recomputed; the cached row is a
    // net-change row, so destinations shift by x.
    double cell_objective(const Cell& c, std::int64_t x, const ValueTable& v) const {
        const double delta = static_cast<double>(x - p_.theta);
        const double running = detail::running_cost_const(c.a, delta, c.dk, p_);
        double dot = 0.0;
        std::int64_t dest = x + c.row0.lo;
        for (double q : c.row0.probs) dot += q * v.clamped(dest++);
        return running + c.disc * dot + c.g;
    }

    // Coordinate golden-section descent within one grid cell of (a0, T0),
    // evaluating the exact objective.
    StageResult refine(std::int64_t x, const ValueTable& v, double a0, double T0, double da,
                       double dt) const {
        const double a_lo = std::max(0.0, a0 - da), a_hi = std::min(p_.a_max, a0 + da);
        const double t_lo = std::max(p_.T_min, T0 - dt), t_hi = std::min(p_.T_max, T0 + dt);
        double a = a0, T = T0;
        double val = stage_objective_const(a, T, x, v, p_);
        for (int pass = 0; pass < 3; ++pass) {
            const auto ra = detail::golden_min(
                [&](double cand) { return stage_objective_const(cand, T, x, v, p_); }, a_lo,
                a_hi, opt_.refine_tol);
            if (ra.value < val) {
                a = ra.arg;
                val = ra.value;
            }
            const auto rt = detail::golden_min(
                [&](double cand) { return stage_objective_const(a, cand, x, v, p_); }, t_lo,
                t_hi, opt_.refine_tol);
            if (rt.value < val) {
                T = rt.arg;
                val = rt.value;
            }
        }
        return StageResult{a, T, val};
    }

    InventoryParams p_;
    InventorySolverOptions opt_;
    Window window_;
    std::vector<double> a_grid_, t_grid_;
    std::vector<Cell> cells_;
    double escape_ = 0.0;
};

// Standalone stage minimization for a single state (same scheme as
// InventoryModel::stage_value without the cached grid).
inline StageResult optimize_stage(std::int64_t x, const ValueTable& v,
                                  const InventoryParams& p, InventorySolverOptions opt = {}) {
    opt.window_margin = std::max<std::int64_t>(
        1, std::max(std::llabs(v.window.lo - p.theta), std::llabs(v.window.hi - p.theta)));
    const InventoryModel model(p, opt);
    return model.stage_value(x, v);
}

// Algorithm driver: v0(x) = |x - theta|, then value iteration to eps_vi.
inline VIResult solve_inventory(const InventoryModel& model, int max_iter = 1000) {
    const Window w = model.state_window();
    ValueTable v0(w);
    for (std::size_t i = 0; i < w.size(); ++i)
        v0.values[i] =
            std::fabs(static_cast<double>(w.state(i) - model.params().theta));
    return value_iteration(model, std::move(v0), model.params().eps_vi, max_iter);
}

// Discounted running cost of a piecewise-constant schedule, segment by
// segment in closed form: on [t0, t1] with level l and y0 = abar(t0) the
// integrand is beta^t [(u + s t)^2 + w + (l + mu) t] with u = delta + y0 -
// l t0, s = l - mu, w = y0 - l t0 + nu l.
inline double schedule_running_cost(std::int64_t x, const RateSchedule& sched,
                                    const InventoryParams& p) {
    const double delta = static_cast<double>(x - p.theta);
    double total = 0.0;
    double y0 = 0.0;
    for (std::size_t i = 0; i < sched.levels.size(); ++i) {
        const double t0 = sched.breakpoints[i], t1 = sched.breakpoints[i + 1];
        const double l = sched.levels[i];
        if (t1 > t0) {
            const double u = delta + y0 - l * t0;
            const double s = l - p.mu;
            const double w = y0 - l * t0 + p.nu * l;
            const DiscountIntegrals k0 = discount_integrals(t0, p.beta);
            const DiscountIntegrals k1 = discount_integrals(t1, p.beta);
            total += (u * u + w) * (k1.dK0 - k0.dK0) +
                     (2.0 * u * s + (l + p.mu)) * (k1.dK1 - k0.dK1) +
                     s * s * (k1.dK2 - k0.dK2);
        }
        y0 += l * (t1 - t0);
    }
    return total;
}

// Full inner objective of a schedule on [0, T]: running cost + terminal
// kernel term at arrival mass abar(T) + g(T).
inline double schedule_objective(std::int64_t x, const RateSchedule& sched,
                                 const ValueTable& v, const InventoryParams& p) {
    const double T = sched.horizon();
    const KernelRow row = kernel_row(x, sched.cum(T), p.mu * T, p.eps_kernel);
    return schedule_running_cost(x, sched, p) +
           std::pow(p.beta, T) * kernel_dot(row, v) + p.g(T);
}

struct CostateTrajectory {
    std::vector<double> t;
    std::vector<double> lambda;
};

// Backward costate integration: lambda' = -beta^t (2(x - theta + y(t) - mu t)
// + 1), terminal condition dh/dy at y(T) by central finite difference on the
// kernel terminal term. Fixed-step RK4 (the RHS is lambda-free, so this is
// Simpson integration of the running-cost gradient).
inline CostateTrajectory costate_backward(std::int64_t x, const RateSchedule& sched, double T,
                                          const ValueTable& v, const InventoryParams& p,
                                          int n_steps = 1000) {
    if (n_steps < 1) throw std::invalid_argument("costate_backward: n_steps must be >= 1");
    const double delta = static_cast<double>(x - p.theta);
    const double disc = std::pow(p.beta, T);
    const auto h_of_y = [&](double y) {
        const KernelRow row = kernel_row(x, y, p.mu * T, p.eps_kernel);
        return disc * kernel_dot(row, v);
    };
    const double yT = sched.cum(T);
    const double fd = 1e-4;
    const double y_lo = std::max(0.0, yT - fd);
    const double y_hi = yT + fd;
    const double lambda_T = (h_of_y(y_hi) - h_of_y(y_lo)) / (y_hi - y_lo);

    const double log_beta = std::log(p.beta);
    const auto rhs = [&](double t) {
        return -std::exp(log_beta * t) *
               (2.0 * (delta + sched.cum(t) - p.mu * t) + 1.0);
    };

    CostateTrajectory traj;
    const std::size_t n = static_cast<std::size_t>(n_steps);
    traj.t.resize(n + 1);
    traj.lambda.resize(n + 1);
    const double h = T / static_cast<double>(n_steps);
    for (std::size_t i = 0; i <= n; ++i) traj.t[i] = static_cast<double>(i) * h;
    traj.t[n] = T;
    traj.lambda[n] = lambda_T;
    for (std::size_t i = n; i > 0; --i) {
        const double t = traj.t[i];
        const double k1 = rhs(t);
        const double k23 = rhs(t - 0.5 * h);
        const double k4 = rhs(t - h);
        traj.lambda[i - 1] = traj.lambda[i] - h / 6.0 * (k1 + 4.0 * k23 + k4);
    }
    return traj;
}

struct BangBangResult {
    RateSchedule sched;
    double objective = 0.0;
    bool law_ok = true;        // pointwise switching-law check outcome
    int n_checked = 0;
    int n_violations = 0;
    std::string warning;       // set when the necessary-condition check fails
};

namespace detail {

inline RateSchedule bang_sched(double first_level, double a_max,
                               const std::vector<double>& switches, double T) {
    RateSchedule s;
    s.breakpoints.push_back(0.0);
    s.breakpoints.insert(s.breakpoints.end(), switches.begin(), switches.end());
    s.breakpoints.push_back(T);
    double level = first_level;
    for (std::size_t i = 0; i + 1 < s.breakpoints.size(); ++i) {
        s.levels.push_back(level);
        level = level == 0.0 ? a_max : 0.0;
    }
    return s;
}

// Drop zero-length segments and merge equal neighbors. Search candidates pin
// switch times to interval endpoints, which leaves degenerate segments in the
// winning schedule otherwise.
inline RateSchedule canonical_schedule(const RateSchedule& s) {
    RateSchedule out;
    out.breakpoints.push_back(s.breakpoints.front());
    for (std::size_t i = 0; i < s.levels.size(); ++i) {
        const double t0 = s.breakpoints[i], t1 = s.breakpoints[i + 1];
        if (!(t1 > t0)) continue;
        if (!out.levels.empty() && out.levels.back() == s.levels[i])
            out.breakpoints.back() = t1;
        else {
            out.levels.push_back(s.levels[i]);
            out.breakpoints.push_back(t1);
        }
    }
    if (out.levels.empty()) {
        out.levels.push_back(s.levels.front());
        out.breakpoints.push_back(s.breakpoints.back());
    }
    return out;
}

}  // namespace detail

// Best piecewise-constant schedule with levels {0, a_max} and at most
// n_switch switching times (n_switch > 2 is searched as 2): coarse grids over
// the switch times followed by coordinate golden-section, then a verification
// of the minimum-principle switching law (level a_max exactly where
// beta^t nu + lambda(t) <= 0) at 10^3 + 1 sample points. A failed check is
// reported via law_ok/warning, not an error: the conditions are necessary,
// not sufficient, and an interior singular arc (rate mu) cannot be expressed
// with two levels — best {0, a_max} schedules then chatter around it.
inline BangBangResult solve_bang_bang(std::int64_t x, double T, const ValueTable& v,
                                      const InventoryParams& p, int n_switch = 2) {
    if (n_switch < 0) throw std::invalid_argument("solve_bang_bang: n_switch must be >= 0");
    const int k_max = std::min(n_switch, 2);
    const double a_max = p.a_max;

    BangBangResult best;
    bool first = true;
    const auto consider = [&](const RateSchedule& s) {
        const double val = schedule_objective(x, s, v, p);
        if (first || val < best.objective) {
            best.sched = s;
            best.objective = val;
            first = false;
        }
    };
    const auto eval = [&](double first_level, const std::vector<double>& sw) {
        return schedule_objective(x, detail::bang_sched(first_level, a_max, sw, T), v, p);
    };

    for (double first_level : {0.0, a_max}) {
        consider(detail::bang_sched(first_level, a_max, {}, T));
        if (k_max >= 1) {
            const int n = 120;
            double s_best = 0.0, v_best = 0.0;
            for (int i = 0; i <= n; ++i) {
                const double s = T * static_cast<double>(i) / n;
                const double val = eval(first_level, {s});
                if (i == 0 || val < v_best) {
                    v_best = val;
                    s_best = s;
                }
            }
            consider(detail::bang_sched(first_level, a_max, {s_best}, T));
            const double h = T / n;
            const auto r = detail::golden_min(
                [&](double s) { return eval(first_level, {s}); },
                std::max(0.0, s_best - h), std::min(T, s_best + h), 1e-6 * T);
            consider(detail::bang_sched(first_level, a_max, {r.arg}, T));
        }
        if (k_max >= 2) {
            const int n = 60;
            double s1b = 0.0, s2b = 0.0, v_best = 0.0;
            bool f2 = true;
            for (int i = 0; i <= n; ++i) {
                for (int j = i; j <= n; ++j) {
                    const double s1 = T * static_cast<double>(i) / n;
                    const double s2 = T * static_cast<double>(j) / n;
                    const double val = eval(first_level, {s1, s2});
                    if (f2 || val < v_best) {
                        v_best = val;
                        s1b = s1;
                        s2b = s2;
                        f2 = false;
                    }
                }
            }
            consider(detail::bang_sched(first_level, a_max, {s1b, s2b}, T));
            const double h = T / n;
            double s1 = s1b, s2 = s2b;
            for (int pass = 0; pass < 3; ++pass) {
                s1 = detail::golden_min(
                         [&](double s) { return eval(first_level, {std::min(s, s2), s2}); },
                         std::max(0.0, s1 - h), std::min(s2, s1 + h), 1e-6 * T)
                         .arg;
                s2 = detail::golden_min(
                         [&](double s) { return eval(first_level, {s1, std::max(s, s1)}); },
                         std::max(s1, s2 - h), std::min(T, s2 + h), 1e-6 * T)
                         .arg;
            }
            consider(detail::bang_sched(first_level, a_max, {s1, s2}, T));
        }
    }

    best.sched = detail::canonical_schedule(best.sched);
    best.objective = schedule_objective(x, best.sched, v, p);

    // switching-law verification along the chosen schedule
    const CostateTrajectory traj = costate_backward(x, best.sched, T, v, p, 1000);
    const double log_beta = std::log(p.beta);
    std::vector<double> phi(traj.t.size());
    for (std::size_t i = 0; i < traj.t.size(); ++i)
        phi[i] = std::exp(log_beta * traj.t[i]) * p.nu + traj.lambda[i];

    std::vector<double> exempt;  // switch times and phi zero crossings
    for (std::size_t i = 1; i + 1 < best.sched.breakpoints.size(); ++i)
        exempt.push_back(best.sched.breakpoints[i]);
    for (std::size_t i = 0; i + 1 < phi.size(); ++i)
        if ((phi[i] < 0.0) != (phi[i + 1] < 0.0)) {
            const double span = traj.t[i + 1] - traj.t[i];
            const double frac = phi[i] == phi[i + 1] ? 0.5 : phi[i] / (phi[i] - phi[i + 1]);
            exempt.push_back(traj.t[i] + span * frac);
        }

    const double tol = 1e-3 * T;
    best.n_checked = static_cast<int>(traj.t.size());
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        const double level = best.sched.rate_at(traj.t[i]);
        const double want = phi[i] <= 0.0 ? a_max : 0.0;
        if (level == want) continue;
        double dist = std::numeric_limits<double>::infinity();
        for (double e : exempt) dist = std::min(dist, std::fabs(traj.t[i] - e));
        if (dist > tol) ++best.n_violations;
    }
    best.law_ok = best.n_violations == 0;
    if (!best.law_ok)
        best.warning = "switching law violated at " + std::to_string(best.n_violations) +
                       " of " + std::to_string(best.n_checked) +
                       " sample points (necessary conditions only; interior singular arcs "
                       "cannot be matched by a two-level schedule)";
    return best;
}

}  // namespace obsmdp
