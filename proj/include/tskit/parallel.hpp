#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace tskit {

/// Worker count for parallel sections: TSKIT_THREADS if set (0 = auto),
/// otherwise hardware concurrency.
std::size_t thread_count();

/// Runs fn(i) for i in [0, n). Work items must write to disjoint slots so the
/// result is independent of scheduling. Exceptions from workers are rethrown
/// on the calling thread (first one wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace tskit
