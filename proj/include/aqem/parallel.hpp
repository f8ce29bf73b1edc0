#pragma once

#include <cstddef>
#include <functional>

namespace aqem {

/// Number of worker threads to use when `requested` is 0 (hardware concurrency, at least 1).
unsigned resolve_threads(unsigned requested);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// visited exactly once; callers write results into per-index slots so the
/// outcome never depends on scheduling. The first exception thrown by any
/// body is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace aqem
