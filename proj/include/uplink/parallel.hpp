#pragma once

#include <cstddef>
#include <functional>

namespace uplink {

// Worker count from UPLINK_COVERAGE_THREADS (0 or unset = hardware concurrency).
unsigned resolve_thread_count();

// Runs body(i) for i in [0, n) on up to `threads` workers (0 = resolve_thread_count()).
// Indices are handed out in contiguous blocks; the first exception thrown by
// any worker is rethrown on the calling thread after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

}  // namespace uplink
