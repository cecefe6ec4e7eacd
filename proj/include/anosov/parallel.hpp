#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace anosov {

/// Worker count: ANOSOV_THREADS if set to a positive integer, otherwise the
/// hardware concurrency.
inline int default_threads() {
    if (const char* env = std::getenv("ANOSOV_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, n). Each index writes only its own output slot,
/// so results do not depend on scheduling. The first exception is rethrown.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int threads = 0) {
    if (threads <= 0) threads = default_threads();
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n && !failed; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace anosov
