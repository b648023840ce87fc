#pragma once

#include <cstddef>
#include <functional>

namespace timekernel {

/// Caps worker threads for parallel_for. 0 restores the hardware default.
void set_max_threads(unsigned count);
unsigned max_threads();

/// Runs body(i) for i in [0, count). Each index runs exactly once; callers
/// must write only to per-index slots. The first exception thrown by any
/// index is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace timekernel
