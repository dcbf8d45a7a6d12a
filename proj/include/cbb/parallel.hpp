#pragma once

#include <thread>
#include <vector>

// Deterministic chunked map-reduce: the index range is cut into one chunk
// per worker and partial results are merged in chunk order, so any
// associative+commutative merge gives results independent of the worker
// count and of thread scheduling.

namespace cbb {

inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

template <class Result, class ChunkFn, class MergeFn>
Result parallel_reduce(long total, int workers, Result init, ChunkFn per_chunk, MergeFn merge) {
    workers = resolve_workers(workers);
    if (total <= 0) return init;
    const long chunks = std::min<long>(workers, total);
    std::vector<Result> partial(chunks, init);
    std::vector<std::thread> pool;
    pool.reserve(chunks);
    for (long c = 0; c < chunks; ++c) {
        const long lo = total * c / chunks;
        const long hi = total * (c + 1) / chunks;
        pool.emplace_back([&, c, lo, hi] { partial[c] = per_chunk(lo, hi); });
    }
    for (auto& t : pool) t.join();
    Result out = init;
    for (long c = 0; c < chunks; ++c) out = merge(out, partial[c]);
    return out;
}

}  // namespace cbb
