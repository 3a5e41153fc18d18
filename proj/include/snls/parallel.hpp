#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace snls {

/// Degree used by parallel_for; 0 means hardware concurrency.
void set_thread_count(int threads);
int thread_count();

/// Static block partition of [0, count); body(i) must write only to
/// i-indexed slots so results are independent of the degree.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const std::size_t workers =
        std::min<std::size_t>(count, static_cast<std::size_t>(thread_count()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace snls
