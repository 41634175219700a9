#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace helmscat::detail {

// Chunked parallel loop over [0, n). Each index is processed exactly once and
// writes only its own output slot, so results do not depend on the thread
// count.
inline void parallel_for(int n, const std::function<void(int)>& fn) {
    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    const int workers = std::max(1, std::min(hw, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int lo = w * chunk;
        const int hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (int i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace helmscat::detail
