#include "polykin/parallel.hpp"

#include <atomic>

namespace polykin {

namespace {
std::atomic<int> g_max_threads{0};
}

void set_max_threads(int n) { g_max_threads.store(n < 0 ? 0 : n); }

int max_threads() {
    int n = g_max_threads.load();
    if (n == 0) {
        n = static_cast<int>(std::thread::hardware_concurrency());
        if (n == 0) n = 1;
    }
    return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
    if (n == 0) return;
    const int workers = std::min<std::size_t>(static_cast<std::size_t>(max_threads()), n);
    if (workers <= 1) {
        body(0, n);
        return;
    }
    // fixed chunking, independent of worker count
    const std::size_t chunks = std::min<std::size_t>(n, 64);
    const std::size_t chunk_size = (n + chunks - 1) / chunks;
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t c = next.fetch_add(1);
                if (c >= chunks) break;
                const std::size_t lo = c * chunk_size;
                const std::size_t hi = std::min(n, lo + chunk_size);
                if (lo < hi) body(lo, hi);
            }
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace polykin
