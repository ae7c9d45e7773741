#pragma once

#include <cstddef>
#include <functional>

namespace dosgk {

/// Worker count from the DOSGK_THREADS environment variable when set,
/// otherwise std::thread::hardware_concurrency() (at least 1).
std::size_t default_thread_count();

/// Runs fn(i) for i in [0, count) on up to `threads` workers, dynamic
/// scheduling. The first exception thrown by any task is rethrown here.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace dosgk
