#pragma once

#include <cstddef>
#include <functional>

namespace wvrecon {

// Caps the number of worker threads used by parallel_for. 0 restores the
// default (hardware concurrency, or the WVRECON_THREADS environment value
// when set). Results never depend on the cap.
void set_max_threads(unsigned n);
unsigned max_threads();

// Runs fn(i) for every i in [0, n). Iterations are distributed in fixed-size
// blocks over a work queue; each iteration must write only its own slots so
// the output is bitwise independent of the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace wvrecon
