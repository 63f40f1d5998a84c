#pragma once

#include <cstddef>
#include <functional>

namespace ellipticity {

// Worker count: ELLIPTICITY_LAB_THREADS when set to a positive integer,
// otherwise the hardware concurrency (at least 1).
int worker_count();

// Splits [0, n) into contiguous chunks, one per worker, and calls
// body(begin, end) for each. Chunk boundaries depend only on n and the worker
// count; callers write results per index so reductions stay deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace ellipticity
