#pragma once

#include <cmath>
#include <utility>

namespace obsmdp::detail {

struct MinResult {
    double arg = 0.0;
    double value = 0.0;
};

// Golden-section minimization on [lo, hi] to an argument tolerance; the
// returned value is f evaluated once at the final midpoint.
template <class F>
MinResult golden_min(F&& f, double lo, double hi, double tol) {
    constexpr double gr = 0.6180339887498949;  // (sqrt(5) - 1) / 2
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

}  // namespace obsmdp::detail
