#include "mulab/util.hpp"

namespace mulab {

namespace {
std::atomic<int> g_threads{0};
}

int parallel_threads() {
    int n = g_threads.load(std::memory_order_relaxed);
    if (n <= 0) {
        unsigned hc = std::thread::hardware_concurrency();
        n = hc ? int(hc) : 1;
    }
    return n;
}

void set_parallel_threads(int n) { g_threads.store(n, std::memory_order_relaxed); }

void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t, std::size_t)>& chunk_fn) {
    if (begin >= end) return;
    const std::size_t total = end - begin;
    int nt = parallel_threads();
    if (std::size_t(nt) > total) nt = int(total);
    if (nt <= 1) {
        chunk_fn(begin, end);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(nt));
    const std::size_t step = (total + std::size_t(nt) - 1) / std::size_t(nt);
    for (int t = 0; t < nt; ++t) {
        std::size_t lo = begin + std::size_t(t) * step;
        std::size_t hi = std::min(end, lo + step);
        if (lo >= hi) break;
        pool.emplace_back([&chunk_fn, lo, hi] { chunk_fn(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace mulab
