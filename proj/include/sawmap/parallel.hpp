#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace sawmap {

/**
 * Run body(i) for every i in [0, count) on up to `workers` threads. Items
 * are claimed from a shared counter, so callers that need a deterministic
 * result must write into per-item slots rather than share accumulators.
 * The first exception thrown by any item stops the pool and is rethrown on
 * the calling thread.
 */
inline void parallel_for(std::size_t count, int workers,
                         const std::function<void(std::size_t)>& body) {
    if (workers < 1) throw std::invalid_argument("parallel_for: workers must be >= 1");
    if (count == 0) return;
    const std::size_t n_threads = std::min(static_cast<std::size_t>(workers), count);
    if (n_threads == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace sawmap
