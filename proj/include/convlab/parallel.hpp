#pragma once

#include <cstddef>
#include <functional>

namespace convlab {

/// Worker count: hardware concurrency capped by CONVLAB_THREADS when set.
unsigned worker_count();

/// Runs body(i) for i in [0, count). Each index writes only its own output
/// slot, so results are identical for any thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace convlab
