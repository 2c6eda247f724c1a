#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace obsmdp {

// Contiguous integer state window [lo, hi].
struct Window {
    std::int64_t lo = 0;
    std::int64_t hi = 0;

    std::size_t size() const { return static_cast<std::size_t>(hi - lo + 1); }
    bool contains(std::int64_t x) const { return x >= lo && x <= hi; }
    std::int64_t clamp(std::int64_t x) const { return x < lo ? lo : (x > hi ? hi : x); }
    std::size_t index(std::int64_t x) const { return static_cast<std::size_t>(x - lo); }
    std::int64_t state(std::size_t i) const { return lo + static_cast<std::int64_t>(i); }
    bool operator==(const Window&) const = default;

    void validate() const {
        if (hi < lo) throw std::invalid_argument("window: hi < lo");
    }
};

struct ValueTable {
    Window window;
    std::vector<double> values;
    int iteration_count = 0;
    std::vector<double> residual_history;

    ValueTable() = default;
    ValueTable(Window w, double fill = 0.0) : window(w), values(w.size(), fill) {}

    double& at(std::int64_t x) { return values[window.index(x)]; }
    double at(std::int64_t x) const { return values[window.index(x)]; }
    // value lookup with out-of-window states clamped to the nearest edge
    double clamped(std::int64_t x) const { return values[window.index(window.clamp(x))]; }

    double sup_abs() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::fabs(v));
        return m;
    }
};

inline double sup_norm_diff(const ValueTable& a, const ValueTable& b) {
    if (a.window != b.window)
        throw std::invalid_argument("sup_norm_diff: window mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        m = std::max(m, std::fabs(a.values[i] - b.values[i]));
    return m;
}

struct PolicyEntry {
    std::int64_t x = 0;
    double a = 0.0;
    double T = 0.0;
    double stage_value = 0.0;
};

struct StagePolicy {
    Window window;
    std::vector<PolicyEntry> entries;
    std::string tie_break = "smallest-T-then-smallest-a";

    const PolicyEntry& at(std::int64_t x) const { return entries[window.index(x)]; }
    // out-of-window states act like the nearest edge state
    const PolicyEntry& clamped(std::int64_t x) const {
        return entries[window.index(window.clamp(x))];
    }
};

}  // namespace obsmdp
