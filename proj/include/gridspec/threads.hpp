#ifndef GRIDSPEC_THREADS_HPP
#define GRIDSPEC_THREADS_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace gridspec {

/// Worker count: GRIDSPEC_THREADS if set (>= 1), else the hardware count.
inline int worker_count() {
    if (const char* env = std::getenv("GRIDSPEC_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

/// Run body(i) for i in [0, n). Each index writes only its own output slot, so
/// the result is identical for any worker count (deterministic reduction).
inline void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body) {
    const int workers = std::min<std::int64_t>(worker_count(), n > 0 ? n : 1);
    if (workers <= 1) {
        for (std::int64_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    const std::int64_t chunk = std::max<std::int64_t>(1, n / (workers * 8));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::int64_t begin = next.fetch_add(chunk);
                if (begin >= n) return;
                const std::int64_t end = std::min(n, begin + chunk);
                for (std::int64_t i = begin; i < end; ++i) body(i);
            }
        });
    for (auto& t : pool) t.join();
}

}  // namespace gridspec

#endif  // GRIDSPEC_THREADS_HPP
