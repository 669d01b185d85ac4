#pragma once

#include <cstddef>
#include <functional>

namespace muod {

// Worker count actually used for a requested value: 0 means machine
// parallelism, anything else is taken as-is.
unsigned resolve_threads(unsigned requested);

// Runs fn(begin, end) over a static partition of [0, count). The partition
// depends only on count and the resolved thread count, and exceptions from
// workers are rethrown on the caller, so results are deterministic and
// independent of scheduling as long as fn writes disjoint outputs.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace muod
