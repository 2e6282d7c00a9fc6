#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace maxlenqm {

/// Worker budget: MAXLENQM_THREADS caps it, hardware concurrency is the
/// default (at most 8).  Always at least 1.
inline int thread_budget() {
    int n = static_cast<int>(std::min(8u, std::max(1u, std::thread::hardware_concurrency())));
    if (const char* env = std::getenv("MAXLENQM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) n = static_cast<int>(std::min(v, 64L));
    }
    return n;
}

/// Index-parallel loop.  Each index is processed exactly once and results
/// must be written by index, so the outcome is independent of the thread
/// count; summation inside one index stays sequential.  The first
/// exception thrown by any index is rethrown after all workers join.
template <class F>
void parallel_for(std::size_t count, F&& body) {
    const int workers = static_cast<int>(std::min<std::size_t>(thread_budget(), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next.store(count);
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace maxlenqm
