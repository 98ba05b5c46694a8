#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace moran {

/// How many worker threads bulk evaluations may use. Results never depend on it.
struct Parallelism {
  int threads = 1;
};

/// Calls fn(i) for i in [0, count) using contiguous static chunks. Callers
/// write into slot i only, so any reduction afterwards is ordered.
template <class Fn>
void parallel_for(std::size_t count, Parallelism par, Fn&& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, par.threads));
  if (workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
}

}  // namespace moran
