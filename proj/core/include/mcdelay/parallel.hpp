#pragma once

#include <cstddef>
#include <functional>

namespace mcdelay {

/// Worker count from MCDELAY_THREADS, else std::thread::hardware_concurrency
/// (at least 1).
int default_thread_count();

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 = default).
/// Indices are handed out dynamically; the first exception thrown by any
/// body is rethrown on the caller after all workers join.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace mcdelay
