#pragma once

#include <algorithm>
#include <thread>
#include <vector>

#include "sdgar/types.hpp"

namespace sdgar {

// Static block partition over [0, n). Work items must be independent and
// write only to their own slots, so results do not depend on the thread
// count.
template <class Fn>
void parallel_for(Index n, Index num_threads, Fn&& fn) {
  if (n <= 0) return;
  num_threads = std::max<Index>(1, std::min(num_threads, n));
  if (num_threads == 1) {
    for (Index i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(num_threads));
  const Index chunk = (n + num_threads - 1) / num_threads;
  for (Index w = 0; w < num_threads; ++w) {
    const Index lo = w * chunk;
    const Index hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    workers.emplace_back([lo, hi, &fn] {
      for (Index i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : workers) t.join();
}

}  // namespace sdgar
