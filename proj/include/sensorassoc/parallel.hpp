#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sensorassoc {

/// Number of worker threads to use when the caller passes 0.
inline std::size_t default_thread_count() {
    const auto hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/**
 * Runs body(i) for i in [0, count) on up to num_threads threads. Callers
 * write results into per-index slots, so output order never depends on
 * scheduling. The first exception thrown by any body is rethrown here.
 */
template <typename Body>
void parallel_for(std::size_t count, std::size_t num_threads, Body&& body) {
    if (num_threads == 0) num_threads = default_thread_count();
    num_threads = std::min(num_threads, count);
    if (num_threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(count);
            }
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(num_threads);
    for (std::size_t t = 0; t < num_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace sensorassoc
