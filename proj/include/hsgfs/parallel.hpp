#pragma once

// Ordered parallel map over an index range. Each index is computed exactly
// once and results land in index order, so the output is identical for any
// worker count; the seeded-reproducibility contract relies on this.

#include <cstddef>
#include <thread>
#include <vector>

namespace hsgfs {

inline std::size_t resolve_workers(std::size_t requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// fn(i) -> R must be safe to call concurrently for distinct i.
template <typename R, typename Fn>
std::vector<R> parallel_map(std::size_t count, std::size_t workers, Fn&& fn) {
    std::vector<R> out(count);
    workers = std::min(resolve_workers(workers), count == 0 ? std::size_t{1} : count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) out[i] = fn(i);
        });
    }
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace hsgfs
