#pragma once

#include <cstddef>
#include <functional>

namespace maxavg {

// Worker count: MAXAVG_THREADS if set and positive, else hardware concurrency.
std::size_t worker_count();

// Calls fn(i) for i in [0, n). Each index is handled exactly once; callers write
// results into per-index slots so the outcome never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace maxavg
