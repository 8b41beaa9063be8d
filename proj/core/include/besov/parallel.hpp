#pragma once

#include <cstddef>
#include <functional>

namespace besov {

/// Caps the number of worker threads used by `parallel_for` (0 = hardware).
void set_max_threads(unsigned count);
unsigned max_threads();

/// Runs body(i) for i in [0, count). Each index is visited exactly once;
/// callers write results into per-index slots so the outcome does not
/// depend on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace besov
