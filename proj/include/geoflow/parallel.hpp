#pragma once

#include <cstddef>
#include <functional>

namespace geoflow {

// Worker count: hardware concurrency, capped by GEOFLOW_THREADS when set.
unsigned worker_count();

// Runs body(i) for i in [0, n) on a bounded pool. Iterations must not share mutable state;
// the first exception thrown by any iteration is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace geoflow
