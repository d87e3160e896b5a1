#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace polykin {

/// Global worker cap for parallel_for (0 = hardware concurrency).
/// Set once from the CLI `threads` key before launching solvers.
void set_max_threads(int n);
int max_threads();

/// Parallel loop over [0, n). The range is split into chunks whose count does
/// not depend on the worker count, so chunk-local accumulations combined in
/// chunk order give bitwise identical results for any thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

} // namespace polykin
