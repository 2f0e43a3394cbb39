#pragma once

#include <cstddef>
#include <functional>

namespace ckem {

// Worker count: `requested` if nonzero, else CKEM_THREADS if set, else hardware concurrency.
unsigned thread_count(unsigned requested = 0);

// Calls body(i) for i in [0, n) on up to `threads` workers. Exceptions are rethrown (the one from
// the lowest index) after all workers finish.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace ckem
