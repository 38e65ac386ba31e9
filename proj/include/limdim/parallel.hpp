#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace limdim {

inline unsigned effective_threads(unsigned requested) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (requested == 0) return std::min(hw, 8u);
    return std::min(requested, hw);
}

/// Data-parallel map over [0, n) with an ordered reduction. The chunk grid is
/// fixed (independent of the worker count), and partial results are merged in
/// chunk order, so the outcome does not depend on --threads.
template <class R, class ChunkFn, class MergeFn>
R parallel_map_reduce(std::size_t n, unsigned threads, R init, ChunkFn chunk_fn, MergeFn merge) {
    if (n == 0) return init;
    threads = effective_threads(threads);
    const std::size_t chunks = std::min<std::size_t>(n, 64);
    const std::size_t step = (n + chunks - 1) / chunks;
    std::vector<R> partial(chunks, init);
    if (threads <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) {
            std::size_t lo = c * step, hi = std::min(n, lo + step);
            if (lo < hi) partial[c] = chunk_fn(c, lo, hi);
        }
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> cursor{0};
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&]() {
                for (;;) {
                    std::size_t c = cursor.fetch_add(1);
                    if (c >= chunks) return;
                    std::size_t lo = c * step, hi = std::min(n, lo + step);
                    if (lo < hi) partial[c] = chunk_fn(c, lo, hi);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    R acc = init;
    for (std::size_t c = 0; c < chunks; ++c) acc = merge(std::move(acc), std::move(partial[c]));
    return acc;
}

}  // namespace limdim
