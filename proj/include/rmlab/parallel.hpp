#pragma once

#include <cstddef>
#include <functional>

namespace rmlab {

// Worker count: RMTEST_THREADS caps it, otherwise hardware concurrency.
std::size_t worker_count();

// Runs body(i) for i in [0, count) on a small thread pool. Callers index
// their outputs and RNG streams by i, so results do not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace rmlab
