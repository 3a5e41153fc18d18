#include "snls/parallel.hpp"

#include <algorithm>
#include <atomic>

namespace snls {

namespace {
std::atomic<int> g_threads{1};
}

void set_thread_count(int threads) {
    g_threads = threads > 0 ? threads
                            : std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

int thread_count() { return g_threads.load(); }

}  // namespace snls
