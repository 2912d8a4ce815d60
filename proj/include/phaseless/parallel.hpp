#pragma once

#include <cstddef>
#include <functional>

namespace phaseless {

// Process-wide worker count used by every parallel map. Defaults to the
// hardware concurrency; 0 restores the default.
void set_worker_count(std::size_t workers);
std::size_t worker_count();

// Runs body(begin, end) over [0, count) split into fixed chunks of `grain`
// indices. Chunk boundaries never depend on the worker count, so any body
// that writes only to its own indices produces identical results for every
// worker count. Exceptions from a chunk are rethrown on the calling thread.
void parallel_for(std::size_t count, std::size_t grain,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace phaseless
