#ifndef BANDPICK_THREADING_HPP_
#define BANDPICK_THREADING_HPP_

#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace bandpick {

/// Worker count: min(hardware_concurrency, BANDPICK_THREADS if set). At least 1.
inline unsigned thread_budget() {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("BANDPICK_THREADS")) {
        long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned>(cap) < n) n = static_cast<unsigned>(cap);
    }
    return n;
}

/// Runs fn(i) for i in [0, count) across the thread budget. fn must write only
/// to per-index slots; iteration order is unspecified but coverage is exact.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    unsigned workers = thread_budget();
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    if (workers > count) workers = static_cast<unsigned>(count);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace bandpick

#endif  // BANDPICK_THREADING_HPP_
