#pragma once

#include <cstddef>
#include <functional>

namespace erange {

/// Worker count from ERANGE_THREADS (0 or unset = hardware concurrency).
unsigned worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index is
/// visited exactly once; the exception from the lowest failing index is rethrown
/// after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace erange
