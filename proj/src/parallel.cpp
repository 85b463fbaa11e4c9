#include "herman/parallel.hpp"

#include <omp.h>

#include <atomic>

namespace herman {

namespace {
std::atomic<int> g_max_threads{0};  // 0 = not set yet, use omp default
}

void set_max_threads(int n) { g_max_threads.store(n < 1 ? 1 : n); }

int max_threads() {
  int n = g_max_threads.load();
  if (n == 0) return omp_get_max_threads();
  return n;
}

int threads_for(std::size_t items, std::size_t cost_per_item) {
  // fork/join costs a few microseconds; only split loops with real work
  constexpr std::size_t kMinFlopsPerThread = 16 * 1024;
  int cap = max_threads();
  if (cap <= 1 || items < 2) return 1;
  std::size_t total = items * (cost_per_item == 0 ? 1 : cost_per_item);
  std::size_t by_work = total / kMinFlopsPerThread;
  if (by_work <= 1) return 1;
  std::size_t n = by_work < items ? by_work : items;
  return static_cast<int>(n < static_cast<std::size_t>(cap) ? n : cap);
}

}  // namespace herman
