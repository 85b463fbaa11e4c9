#ifndef HERMAN_PARALLEL_HPP
#define HERMAN_PARALLEL_HPP

#include <cstddef>

namespace herman {

// Global cap on OpenMP worker threads used by the kernels and batch loops.
// 1 selects the serial reference path everywhere. All parallel loops assign
// each output element to exactly one iteration, so results are bit-identical
// for every thread count.
void set_max_threads(int n);
int max_threads();

// Thread count for a loop over `items` units of roughly `cost` flops each.
// Returns 1 when the work is too small to amortize fork/join overhead.
int threads_for(std::size_t items, std::size_t cost_per_item = 1);

}  // namespace herman

#endif
