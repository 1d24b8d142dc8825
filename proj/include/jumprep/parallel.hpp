#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace jumprep {

// Worker count: JUMPREP_THREADS env var wins, otherwise hardware concurrency.
inline int worker_count() {
    if (const char* env = std::getenv("JUMPREP_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return std::min(n, 64);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(std::min(hc, 16u));
}

// Static block partition of [0, n). Work must be written through the index
// (per-slot outputs), so results do not depend on the worker count; callers
// reduce the slots serially afterwards.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, int workers = -1) {
    if (workers <= 0) workers = worker_count();
    if (n == 0) return;
    const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(w);
    const std::size_t chunk = (n + w - 1) / w;
    for (std::size_t k = 0; k < w; ++k) {
        const std::size_t lo = k * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        pool.emplace_back([&, k, lo, hi]() {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace jumprep
