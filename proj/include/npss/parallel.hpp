#pragma once

#include <cstddef>
#include <functional>

namespace npss {

/// Worker count: NPSS_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t thread_count();

/// Runs body(i) for i in [0, n). Iterations must write to disjoint outputs.
/// Calls made from inside a worker run sequentially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace npss
