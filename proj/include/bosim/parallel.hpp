#ifndef BOSIM_PARALLEL_HPP
#define BOSIM_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace bosim {

// Runs body(i) for i in [0, n) across up to `threads` workers. Each index is
// assigned deterministically (static block-cyclic schedule) so results written
// to preallocated slot i never depend on the thread count. threads <= 0 means
// hardware_concurrency.
inline void parallel_for(size_t n, int threads, const std::function<void(size_t)>& body) {
    if (n == 0) return;
    size_t nt = threads > 0 ? static_cast<size_t>(threads)
                            : std::max(1u, std::thread::hardware_concurrency());
    nt = std::min(nt, n);
    if (nt <= 1) {
        for (size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    std::exception_ptr first_error;
    std::mutex err_mutex;
    for (size_t t = 0; t < nt; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (size_t i = t; i < n; i += nt) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace bosim

#endif
