#pragma once

// Deterministic index-space parallelism: workers own disjoint index blocks
// and write to disjoint slots, so results do not depend on the thread count.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace shearmix {

inline std::atomic<int>& thread_count_ref() {
  static std::atomic<int> n{static_cast<int>(std::max(1u, std::thread::hardware_concurrency()))};
  return n;
}

inline void set_thread_count(int n) { thread_count_ref().store(std::max(1, n)); }
inline int thread_count() { return thread_count_ref().load(); }

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  int workers = std::min<std::size_t>(thread_count(), n == 0 ? 1 : n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    std::size_t lo = w * chunk;
    std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace shearmix
