#pragma once

#include <cstddef>
#include <functional>

namespace cvarkit {

/// Worker count: CVARKIT_THREADS if set and positive, else hardware concurrency.
[[nodiscard]] std::size_t thread_count();

/// Runs body(i) for i in [0, count). Each index is visited exactly once; the
/// assignment of indices to threads is unspecified, so bodies must write only
/// to slot i of any shared output. The first exception thrown is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t max_threads = 0);

}  // namespace cvarkit
