#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <thread>
#include <vector>

namespace matchfame {

// How floating-point sums over cycles/neighbors are accumulated. Both modes
// are deterministic; they differ only in rounding.
enum class ReductionMode {
  kOrdered,   // left-to-right in canonical index order
  kPairwise,  // balanced pairwise tree
};

struct ExecutionOptions {
  int threads = 1;
  ReductionMode reduction = ReductionMode::kOrdered;
};

// Runs fn(i) for i in [0, count) on up to `threads` threads in contiguous
// chunks. fn must only write state owned by index i.
template <typename Fn>
void ParallelFor(std::size_t count, int threads, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(threads, 1), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
}

inline double PairwiseSum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return PairwiseSum(values.first(half)) + PairwiseSum(values.subspan(half));
}

inline double Sum(std::span<const double> values, ReductionMode mode) {
  if (mode == ReductionMode::kPairwise) return PairwiseSum(values);
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

}  // namespace matchfame
