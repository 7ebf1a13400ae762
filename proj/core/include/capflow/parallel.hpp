#pragma once

#include <cstddef>
#include <functional>

namespace capflow {

/// Worker count: `requested` when positive, else CAPFLOW_THREADS when set to a
/// positive integer, else the hardware concurrency (at least 1).
int resolve_threads(int requested);

/// Runs body(i) for every i in [0, n) on up to `threads` workers. Each index is
/// handled exactly once, so results written by index are independent of the
/// schedule. If any body throws, one of the exceptions is rethrown after all
/// workers finish.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace capflow
