#pragma once

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace surrokit {

/// Runs fn(i) for i in [0, count) across up to n_threads workers (strided
/// assignment). Each index writes only its own output slot, so the result is
/// identical to the serial loop. The first exception thrown is rethrown in
/// the calling thread.
inline void parallel_for(int count, int n_threads,
                         const std::function<void(int)>& fn) {
    if (n_threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    const int workers = std::min(n_threads, count);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = w; i < count; i += workers) fn(i);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);
}

/// Default worker count: hardware concurrency, at least 1.
inline int default_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace surrokit
