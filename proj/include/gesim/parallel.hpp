#pragma once

#include <cstddef>
#include <functional>

namespace gesim {

/// Resolves a requested worker count: nonzero values pass through, zero falls
/// back to the GESIM_THREADS environment variable, then hardware concurrency.
unsigned resolve_thread_count(unsigned requested);

/// Runs body(i) for i in [0, count) on `threads` workers with static
/// contiguous partitioning. Callers write results into per-index slots so the
/// outcome does not depend on the worker count.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace gesim
