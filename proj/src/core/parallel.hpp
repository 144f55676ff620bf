#pragma once

#include <functional>
#include <thread>

namespace sdg {

/// Worker cap for parallel loops: hardware concurrency, reduced by the
/// SDG_THREADS environment variable when set.
int max_threads();

/// Runs fn(i) for i in [0, n). Work is split into contiguous chunks, one per
/// worker; fn must only write to per-index storage, which keeps results
/// identical for every thread count. threads <= 0 selects max_threads().
void parallel_for(int n, const std::function<void(int)>& fn, int threads = 0);

}  // namespace sdg
