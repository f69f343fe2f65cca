#pragma once

#include <cstddef>
#include <functional>

namespace akmeter {

// Worker cap: min(hardware_concurrency, AKMETER_THREADS when set). At least 1.
std::size_t worker_count();

// Static-partition parallel loop over [begin, end). Each index is processed
// exactly once and writes only its own outputs, so results do not depend on
// the thread count. Falls back to a serial loop for small ranges.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body);

}  // namespace akmeter
