#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace obsmdp {

namespace detail {

// lgamma(k + 1) with a one-time table for the k the kernels actually hit.
inline double log_factorial(std::int64_t k) {
    static const std::vector<double> table = [] {
        std::vector<double> t(1 << 16);
        for (std::size_t i = 0; i < t.size(); ++i)
            t[i] = std::lgamma(static_cast<double>(i) + 1.0);
        return t;
    }();
    if (k >= 0 && static_cast<std::size_t>(k) < table.size())
        return table[static_cast<std::size_t>(k)];
    return std::lgamma(static_cast<double>(k) + 1.0);
}

}  // namespace detail

// log P[N = k] for N ~ Poisson(mean); computed via lgamma so large k / large
// mean stay finite long after the linear-space pmf has underflowed.
inline double poisson_log_pmf(std::int64_t k, double mean) {
    if (mean < 0.0 || std::isnan(mean))
        throw std::domain_error("poisson_log_pmf: mean must be >= 0");
    if (k < 0) return -std::numeric_limits<double>::infinity();
    if (mean == 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    return static_cast<double>(k) * std::log(mean) - mean - detail::log_factorial(k);
}

inline double poisson_pmf(std::int64_t k, double mean) {
    return std::exp(poisson_log_pmf(k, mean));
}

// Smallest K with tail mass beyond K below eps. Linear cumulative scan; the
// hard cap only matters when eps is below representable resolution.
inline std::int64_t poisson_cutoff(double mean, double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::domain_error("poisson_cutoff: eps must be in (0,1)");
    if (mean < 0.0) throw std::domain_error("poisson_cutoff: mean must be >= 0");
    if (mean == 0.0) return 0;
    const std::int64_t cap =
        static_cast<std::int64_t>(mean + 20.0 * std::sqrt(mean + 1.0)) + 120;
    double cum = 0.0;
    for (std::int64_t k = 0; k <= cap; ++k) {
        cum += poisson_pmf(k, mean);
        if (cum >= 1.0 - eps) return k;
    }
    return cap;
}

// One row of the transition kernel: net-change distribution of
// arrivals(mass A) - departures(mass M), truncated but never renormalized.
// Support is the contiguous window [lo, lo + probs.size() - 1].
struct KernelRow {
    std::int64_t source_state = 0;
    std::int64_t lo = 0;
    std::vector<double> probs;
    double retained_mass = 0.0;
    double truncation_eps = 0.0;

    std::int64_t hi() const { return lo + static_cast<std::int64_t>(probs.size()) - 1; }
    double prob(std::int64_t dest) const {
        if (dest < lo || dest > hi()) return 0.0;
        return probs[static_cast<std::size_t>(dest - lo)];
    }
};

namespace detail {

inline std::vector<double> poisson_vector(double mean, std::int64_t k_max) {
    std::vector<double> p(static_cast<std::size_t>(k_max) + 1);
    for (std::int64_t k = 0; k <= k_max; ++k)
        p[static_cast<std::size_t>(k)] = poisson_pmf(k, mean);
    return p;
}

// P[net = d] as the Skellam convolution sum over the common count m,
// ascending in m. Kept as the single evaluation point so single-entry and
// whole-row queries agree bitwise.
inline double skellam_term(const std::vector<double>& pa, const std::vector<double>& pm,
                           std::int64_t d) {
    const std::int64_t ka = static_cast<std::int64_t>(pa.size()) - 1;
    const std::int64_t km = static_cast<std::int64_t>(pm.size()) - 1;
    const std::int64_t m_lo = d < 0 ? -d : 0;
    const std::int64_t m_hi = km < ka - d ? km : ka - d;
    double s = 0.0;
    for (std::int64_t m = m_lo; m <= m_hi; ++m)
        s += pa[static_cast<std::size_t>(m + d)] * pm[static_cast<std::size_t>(m)];
    return s;
}

}  // namespace detail

inline KernelRow kernel_row(std::int64_t x, double arrival_mass, double departure_mass,
                            double eps) {
    if (arrival_mass < 0.0 || departure_mass < 0.0)
        throw std::domain_error("kernel_row: masses must be >= 0");
    // eps/2 tail per Poisson factor -> at least 1 - eps retained overall.
    const std::int64_t ka = arrival_mass > 0.0 ? poisson_cutoff(arrival_mass, eps / 2) : 0;
    const std::int64_t km = departure_mass > 0.0 ? poisson_cutoff(departure_mass, eps / 2) : 0;
    const auto pa = detail::poisson_vector(arrival_mass, ka);
    const auto pm = detail::poisson_vector(departure_mass, km);

    KernelRow row;
    row.source_state = x;
    row.lo = x - km;
    row.truncation_eps = eps;
    row.probs.resize(static_cast<std::size_t>(ka + km) + 1);
    double sum = 0.0;
    for (std::int64_t d = -km; d <= ka; ++d) {
        const double q = detail::skellam_term(pa, pm, d);
        row.probs[static_cast<std::size_t>(d + km)] = q;
        sum += q;
    }
    row.retained_mass = sum;
    return row;
}

inline double birth_death_kernel(std::int64_t x, std::int64_t x_prime, double arrival_mass,
                                 double departure_mass, double eps) {
    if (arrival_mass < 0.0 || departure_mass < 0.0)
        throw std::domain_error("birth_death_kernel: masses must be >= 0");
    const std::int64_t d = x_prime - x;
    const std::int64_t ka = arrival_mass > 0.0 ? poisson_cutoff(arrival_mass, eps / 2) : 0;
    const std::int64_t km = departure_mass > 0.0 ? poisson_cutoff(departure_mass, eps / 2) : 0;
    if (d < -km || d > ka) return 0.0;
    const auto pa = detail::poisson_vector(arrival_mass, ka);
    const auto pm = detail::poisson_vector(departure_mass, km);
    return detail::skellam_term(pa, pm, d);
}

// Definite integrals dKi = \int_0^T t^i beta^t dt, i = 0,1,2. Closed form in
// L = ln beta with a Taylor fallback where beta^T - 1 would cancel.
struct DiscountIntegrals {
    double dK0 = 0.0;
    double dK1 = 0.0;
    double dK2 = 0.0;
};

inline DiscountIntegrals discount_integrals(double T, double beta) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::domain_error("discount_integrals: beta must be in (0,1)");
    if (T < 0.0) throw std::domain_error("discount_integrals: T must be >= 0");
    const double L = std::log(beta);
    const double z = T * L;
    DiscountIntegrals r;
    if (std::fabs(z) < 0.02) {
        // dKi = T^{i+1} * sum_n z^n / (n! (n+i+1)), truncated at n = 5.
        const double z2 = z * z, z3 = z2 * z, z4 = z3 * z, z5 = z4 * z;
        r.dK0 = T * (1.0 + z / 2 + z2 / 6 + z3 / 24 + z4 / 120 + z5 / 720);
        r.dK1 = T * T * (1.0 / 2 + z / 3 + z2 / 8 + z3 / 30 + z4 / 144 + z5 / 840);
        r.dK2 = T * T * T * (1.0 / 3 + z / 4 + z2 / 10 + z3 / 36 + z4 / 168 + z5 / 960);
    } else {
        const double bt = std::exp(z);
        r.dK0 = (bt - 1.0) / L;
        r.dK1 = (T * bt - r.dK0) / L;
        r.dK2 = (T * T * bt - 2.0 * r.dK1) / L;
    }
    return r;
}

}  // namespace obsmdp
