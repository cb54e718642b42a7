#pragma once

#include <cstddef>
#include <functional>

namespace kinscape {

// Worker count: explicit request if positive, else KINSCAPE_WORKERS, else
// all hardware threads.
int worker_count(int requested = 0);

// Calls fn(i) for i in [0, n) on up to `workers` threads. Each index is
// handled exactly once; callers write results by index, so output never
// depends on scheduling.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace kinscape
