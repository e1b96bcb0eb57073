#pragma once

#include <cstddef>
#include <functional>

namespace ndet {

// Resolves a requested worker count; 0 means one per hardware thread.
std::size_t resolve_workers(std::size_t requested);

// Calls fn(i) for i in [0, count) across `workers` threads. Items are handed
// out by an atomic counter, so fn must only write to per-index slots. The
// first exception thrown by any call is rethrown after all threads join.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);

}  // namespace ndet
