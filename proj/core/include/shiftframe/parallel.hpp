#pragma once

#include <cstddef>
#include <functional>

namespace shiftframe {

/// Worker cap: min(hardware_concurrency, SHIFTFRAME_THREADS if set).
int max_threads();

/// Runs fn(i) for i in [0, count). Work is split statically across threads;
/// fn must only write to per-index slots so results are independent of the
/// schedule. Exceptions are rethrown on the calling thread (the one with the
/// lowest index wins, which keeps error reporting deterministic).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace shiftframe
