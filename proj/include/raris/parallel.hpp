#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace raris {

/// Evaluates fn(i) for i in [begin, end) on up to `workers` threads and stores
/// the results by index, so the output does not depend on the thread count.
/// The first exception thrown by any worker is rethrown.
template <class T, class Fn>
std::vector<T> parallel_map(std::int64_t begin, std::int64_t end, int workers, Fn&& fn) {
    const std::int64_t count = std::max<std::int64_t>(0, end - begin);
    std::vector<T> out(static_cast<std::size_t>(count));
    const int w = static_cast<int>(std::clamp<std::int64_t>(workers, 1, std::max<std::int64_t>(1, count)));
    if (w == 1) {
        for (std::int64_t i = 0; i < count; ++i) out[i] = fn(begin + i);
        return out;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (int t = 0; t < w; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::int64_t i = t; i < count; i += w) out[i] = fn(begin + i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return out;
}

}  // namespace raris
