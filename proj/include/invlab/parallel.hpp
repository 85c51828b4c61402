#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace invlab {

// Process-wide worker count for loop parallelism. Results never depend on it:
// parallel loops only write disjoint slots and all reductions run serially.
inline int& thread_count() {
  static int n = 1;
  return n;
}

inline void set_thread_count(int n) { thread_count() = std::max(1, n); }

// Static block split of [0, n); body(i) must touch only slot i's data.
template <typename Body>
void parallel_for(std::int64_t n, const Body& body) {
  const int workers = std::min<std::int64_t>(thread_count(), n);
  if (workers <= 1) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const std::int64_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t begin = w * chunk;
    const std::int64_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([begin, end, &body] {
      for (std::int64_t i = begin; i < end; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace invlab
