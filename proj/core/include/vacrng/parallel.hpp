#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace vacrng {

/// Runs fn(index, worker) for index in [0, count) on up to `workers` threads. Work is claimed
/// dynamically, so fn must write its result to a slot keyed by index; the first exception is rethrown.
template<typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i, 0u);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr       error;
    std::mutex               error_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                    fn(i, w);
                }
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                next.store(count);
            }
        });
    }
    pool.clear();
    if (error) {
        std::rethrow_exception(error);
    }
}

} // namespace vacrng
