#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace sympq {

inline int thread_count() {
    if (const char* env = std::getenv("SYMPQ_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : (int)hw;
}

// Contiguous-chunk parallel for. Workers see disjoint [begin, end) ranges;
// callers merge per-index results in order, keeping runs bit-identical.
inline void parallel_for(long long n, const std::function<void(long long, long long)>& body) {
    int T = thread_count();
    if (n <= 0) return;
    if (T <= 1 || n == 1) {
        body(0, n);
        return;
    }
    if ((long long)T > n) T = (int)n;
    std::vector<std::thread> workers;
    long long chunk = (n + T - 1) / T;
    for (int t = 0; t < T; ++t) {
        long long lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& w : workers) w.join();
}

}  // namespace sympq
