#pragma once

#include <cstddef>
#include <functional>

namespace coherentfl {

// Worker cap: COHERENTFL_THREADS if set (>= 1), else hardware concurrency.
int max_threads();

// Runs fn(i) for i in [0, n). Work items must be independent; callers that
// reduce results do so into per-index slots and combine in index order, so
// output is identical for any thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace coherentfl
