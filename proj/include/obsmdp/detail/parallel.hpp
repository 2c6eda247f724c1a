#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace obsmdp::detail {

inline unsigned& thread_count_ref() {
    static unsigned n = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    return n;
}

inline void set_thread_count(unsigned n) { thread_count_ref() = std::max(1u, n); }
inline unsigned thread_count() { return thread_count_ref(); }

// Static chunking; fn(i) must write only to slot i of any shared output, so
// results are identical for every thread count.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(thread_count(), n ? n : 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = n * w / workers;
        const std::size_t hi = n * (w + 1) / workers;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace obsmdp::detail
