#ifndef HILLQ_PARALLEL_HPP
#define HILLQ_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace hillq {

/// Worker count: `requested` if nonzero, else HILLQ_THREADS if set, else the
/// hardware concurrency. HILLQ_THREADS also caps an explicit request.
unsigned thread_count(unsigned requested = 0);

/// Runs body(i) for i in [0, n) over contiguous chunks. Each i is visited
/// exactly once; results must be written to per-i slots.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace hillq

#endif  // HILLQ_PARALLEL_HPP
