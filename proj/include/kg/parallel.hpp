#pragma once

#include <cstddef>
#include <functional>

namespace kg {

/// Worker count: hardware concurrency, capped by the KG_THREADS environment
/// variable when it is set to a positive integer.
unsigned worker_count();

/// Runs body(begin, end) over contiguous chunks of [0, n).  The partition
/// depends only on n and the worker count; each index is visited exactly
/// once.  Exceptions thrown by a worker are rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  unsigned workers = 0);

}  // namespace kg
