#pragma once

#include <cstddef>
#include <functional>

namespace gibbs {

// Worker count: GIBBS_SHAPES_THREADS if set to a positive integer, else the
// hardware concurrency. Read on every call so tests can change it.
std::size_t thread_budget();

// Runs body(i) for i in [0, n). Indices are handed out dynamically; callers
// write results into per-index slots so the outcome is independent of the
// thread count. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, std::size_t threads = 0);

}  // namespace gibbs
