#pragma once

#include <cstddef>
#include <functional>

namespace segdiag {

// Worker cap from SEGDIAG_THREADS; 0 or unset means hardware concurrency.
std::size_t worker_count();

// Runs fn(i) for i in [0, n) on up to worker_count() threads. Callers write
// results into pre-sized slots indexed by i, so output order never depends
// on scheduling. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace segdiag
