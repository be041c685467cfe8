#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace fenelab {

/// Runs fn(i) for i in [0, n) on `workers` threads over fixed index chunks.
/// Tasks must write only to disjoint, preallocated slots; reductions over the
/// results happen sequentially afterwards, so outputs do not depend on the
/// worker count.
inline void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    int w = std::max(1, workers);
    if (w == 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    w = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(w), n));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(w));
    const std::size_t chunk = (n + static_cast<std::size_t>(w) - 1) / static_cast<std::size_t>(w);
    for (int t = 0; t < w; ++t) {
        const std::size_t lo = static_cast<std::size_t>(t) * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace fenelab
