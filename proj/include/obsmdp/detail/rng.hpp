#pragma once

#include <cmath>
#include <cstdint>

namespace obsmdp::detail {

// splitmix64: small, fast, and every seed gives an independent-looking
// stream, which is all the simulator needs.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // (0, 1): keeps log() finite so exponential gaps are strictly positive
    double uniform_open() {
        return (static_cast<double>(next() >> 12) + 0.5) * 0x1.0p-52;
    }

    double exponential(double rate) { return -std::log(uniform_open()) / rate; }

    // Knuth's product method, in blocks so the e^-mean threshold never
    // underflows for large means.
    std::int64_t poisson(double mean) {
        std::int64_t total = 0;
        while (mean > 500.0) {
            total += poisson(500.0);
            mean -= 500.0;
        }
        const double limit = std::exp(-mean);
        double prod = 1.0;
        std::int64_t k = -1;
        do {
            ++k;
            prod *= uniform_open();
        } while (prod > limit);
        return total + k;
    }
};

// Stream for the index-th rollout under a base seed. Indexed derivation means
// growing a batch appends new streams without disturbing existing ones. The
// scramble matters: a bare base + gamma*index start would put every stream on
// the same orbit shifted by index draws, making "independent" rollouts reuse
// each other's uniforms.
inline std::uint64_t substream_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace obsmdp::detail
