#ifndef QST_PARALLEL_HPP
#define QST_PARALLEL_HPP

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

// OpenMP wrappers for the hot kernels. Work is split into fixed-size chunks
// so that results do not depend on the number of threads: a parallel map
// writes each element independently, and reductions combine per-chunk
// partials in chunk order on the calling thread.

namespace qst {

namespace detail {
inline int& thread_count() {
    static int n = 1;
    return n;
}
}  // namespace detail

// Global thread count used by the parallel kernels. 1 = serial (the default;
// the CLI raises it via --threads).
inline int num_threads() { return detail::thread_count(); }
inline void set_num_threads(int n) { detail::thread_count() = n < 1 ? 1 : n; }

inline constexpr std::int64_t kParallelChunk = 1024;

template <typename F>
void parallel_for(std::int64_t n, F&& f) {
    const int threads = num_threads();
#ifdef _OPENMP
    if (threads > 1 && n > 1) {
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
        for (std::int64_t i = 0; i < n; ++i) f(i);
        return;
    }
#endif
    (void)threads;
    for (std::int64_t i = 0; i < n; ++i) f(i);
}

// Chunked map: body(begin, end) handles one fixed-size block. Block
// boundaries never depend on the thread count.
template <typename F>
void parallel_for_chunks(std::int64_t n, F&& body) {
    const std::int64_t nchunks = (n + kParallelChunk - 1) / kParallelChunk;
    const int threads = num_threads();
#ifdef _OPENMP
    if (threads > 1 && nchunks > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (std::int64_t c = 0; c < nchunks; ++c) {
            const std::int64_t begin = c * kParallelChunk;
            const std::int64_t end = std::min(begin + kParallelChunk, n);
            body(begin, end);
        }
        return;
    }
#endif
    (void)threads;
    for (std::int64_t c = 0; c < nchunks; ++c) {
        const std::int64_t begin = c * kParallelChunk;
        const std::int64_t end = std::min(begin + kParallelChunk, n);
        body(begin, end);
    }
}

// Chunked reduction. partial(begin, end) -> T computed in parallel,
// combine(acc, T) applied serially in chunk order, starting from init.
template <typename T, typename Partial, typename Combine>
T parallel_reduce_chunks(std::int64_t n, T init, Partial&& partial, Combine&& combine) {
    const std::int64_t nchunks = (n + kParallelChunk - 1) / kParallelChunk;
    if (nchunks <= 1) {
        if (n <= 0) return init;
        return combine(std::move(init), partial(std::int64_t{0}, n));
    }
    std::vector<T> parts(static_cast<std::size_t>(nchunks), init);
    const int threads = num_threads();
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads > 1)
#endif
    for (std::int64_t c = 0; c < nchunks; ++c) {
        const std::int64_t begin = c * kParallelChunk;
        const std::int64_t end = std::min(begin + kParallelChunk, n);
        parts[static_cast<std::size_t>(c)] = partial(begin, end);
    }
    T acc = std::move(init);
    for (auto& p : parts) acc = combine(std::move(acc), std::move(p));
    return acc;
}

}  // namespace qst

#endif
