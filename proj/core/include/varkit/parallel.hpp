#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace varkit {

/// Worker count from VARKIT_WORKERS, else hardware concurrency; at least 1.
int default_workers();

/// Runs body(i) for i in [0, n) on up to `workers` threads. Each index is
/// handled exactly once; callers write into per-index slots so the combined
/// result does not depend on scheduling.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body);

template <class T, class F>
std::vector<T> parallel_map(std::size_t n, int workers, F&& fn) {
  std::vector<T> out(n);
  parallel_for(n, workers, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace varkit
