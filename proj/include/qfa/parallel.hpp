#pragma once

// Thread-count-independent parallelism: results are written into
// per-index slots and reduced in index order by the caller, so reports
// built from them are identical at any thread count.

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace qfa {

/// Run fn(i) for i in [0, n) on up to `threads` workers. Work is handed
/// out through an atomic counter; fn must write its result keyed by i.
template <typename Fn>
void parallel_for_index(std::size_t n, unsigned threads, Fn&& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace qfa
