#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace stoda {

// Number of worker threads: STODA_THREADS if set (>=1), else hardware count.
int thread_count();

// Chunked parallel loop over [0, n). The callable receives an index range
// [begin, end) and must only write to per-index slots, so results do not
// depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

// Full-precision decimal formatting (17 significant digits, %.17g).
std::string format_full(double x);

}  // namespace stoda
