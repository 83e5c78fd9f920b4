#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

#include "heisenlab/config.hpp"

namespace heisenlab {

// Splits [0, n) into contiguous ranges, one per worker, and calls
// fn(begin, end, worker_index) on each. Callers reduce per-worker partials in
// worker order so results are identical for any worker count.
template <class Fn>
void parallel_ranges(std::size_t n, Fn&& fn, unsigned workers = worker_count()) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    fn(std::size_t{0}, n, 0u);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(n, w * chunk);
    const std::size_t end = std::min(n, begin + chunk);
    threads.emplace_back([&fn, begin, end, w] { fn(begin, end, w); });
  }
  for (auto& t : threads) t.join();
}

}  // namespace heisenlab
