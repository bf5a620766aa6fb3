#pragma once

#include <cstddef>
#include <functional>

namespace geokrig {

/// Number of worker threads used by internally parallel operations.
/// Defaults to the GEOKRIG_THREADS environment variable when set, otherwise
/// the hardware concurrency.
int thread_count();

/// Override the thread count for this process (CLI --threads). n < 1 resets
/// to the default.
void set_thread_count(int n);

/// Runs fn(chunk_index, begin, end) for every chunk of [0, n) split into
/// fixed chunk_size pieces. Chunk boundaries depend only on n and
/// chunk_size, never on the thread count, so callers that keep per-chunk
/// partial results and merge them in chunk order get bit-identical output
/// regardless of parallelism.
void parallel_chunks(std::size_t n, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

}  // namespace geokrig
