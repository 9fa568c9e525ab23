#ifndef QSPRING_PARALLEL_HPP
#define QSPRING_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace qspring {

// Worker count: QSPRING_THREADS if set (>= 1), otherwise the hardware
// concurrency.
int worker_count();

// Runs f(i) for i in [0, n). Iterations must be independent; each writes only
// its own output slot, so results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace qspring

#endif  // QSPRING_PARALLEL_HPP
