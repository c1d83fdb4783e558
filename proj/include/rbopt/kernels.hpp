#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace rbopt::kern {

/// Reduction granularity. Partial sums are always accumulated over fixed
/// [b*kBlock, (b+1)*kBlock) windows and then combined in block order, so a
/// reduction gives bit-identical results for any worker count. The *_serial
/// twins run the same blocked order on one thread; they are the reference
/// implementations the parallel kernels are tested and benchmarked against.
inline constexpr std::int64_t kBlock = 4096;

/// Set the worker count for all parallel kernels (0 = hardware default).
void set_workers(int n);
int workers();

template <class F>
double block_sum_serial(std::int64_t n, F&& f) {
  double total = 0.0;
  for (std::int64_t b0 = 0; b0 < n; b0 += kBlock) {
    const std::int64_t b1 = std::min(n, b0 + kBlock);
    double part = 0.0;
    for (std::int64_t i = b0; i < b1; ++i) part += f(i);
    total += part;
  }
  return total;
}

template <class F>
double block_sum(std::int64_t n, F&& f) {
  const std::int64_t nblocks = (n + kBlock - 1) / kBlock;
  if (nblocks <= 1) return block_sum_serial(n, f);
  std::vector<double> parts(static_cast<std::size_t>(nblocks));
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < nblocks; ++b) {
    const std::int64_t b0 = b * kBlock;
    const std::int64_t b1 = std::min(n, b0 + kBlock);
    double part = 0.0;
    for (std::int64_t i = b0; i < b1; ++i) part += f(i);
    parts[static_cast<std::size_t>(b)] = part;
  }
  double total = 0.0;
  for (double p : parts) total += p;
  return total;
}

// Integer reductions are order-free; no blocking needed.
template <class Pred>
std::int64_t count_serial(std::int64_t n, Pred&& pred) {
  std::int64_t c = 0;
  for (std::int64_t i = 0; i < n; ++i) c += pred(i) ? 1 : 0;
  return c;
}

template <class Pred>
std::int64_t count(std::int64_t n, Pred&& pred) {
  std::int64_t c = 0;
#pragma omp parallel for schedule(static) reduction(+ : c)
  for (std::int64_t i = 0; i < n; ++i) c += pred(i) ? 1 : 0;
  return c;
}

/// Elementwise map: body(i) for i in [0, n). Bodies must touch disjoint state.
template <class F>
void map_serial(std::int64_t n, F&& body) {
  for (std::int64_t i = 0; i < n; ++i) body(i);
}

template <class F>
void map(std::int64_t n, F&& body) {
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) body(i);
}

/// Smallest index where pred holds, or -1. Deterministic under parallelism.
template <class Pred>
std::int64_t first_index(std::int64_t n, Pred&& pred) {
  std::int64_t found = n;
#pragma omp parallel for schedule(static) reduction(min : found)
  for (std::int64_t i = 0; i < n; ++i) {
    if (pred(i) && i < found) found = i;
  }
  return found == n ? -1 : found;
}

}  // namespace rbopt::kern
