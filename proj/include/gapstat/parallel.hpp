#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace gapstat {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs fn(shard) for shard in [0, shards). Shards are a fixed decomposition of
// the work, independent of the thread count; callers combine per-shard results
// in shard order afterwards, so outputs never depend on scheduling.
inline void parallel_for_shards(std::size_t shards, int threads,
                                const std::function<void(std::size_t)>& fn) {
    threads = resolve_threads(threads);
    if (threads <= 1 || shards <= 1) {
        for (std::size_t s = 0; s < shards; ++s) fn(s);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex err_mu;
    auto worker = [&]() {
        for (;;) {
            std::size_t s = next.fetch_add(1);
            if (s >= shards || failed.load()) return;
            try {
                fn(s);
            } catch (...) {
                {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!first_error) first_error = std::current_exception();
                }
                failed.store(true);
                return;
            }
        }
    };
    std::size_t nworkers = std::min<std::size_t>(static_cast<std::size_t>(threads), shards);
    std::vector<std::thread> pool;
    pool.reserve(nworkers);
    for (std::size_t t = 0; t < nworkers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace gapstat
