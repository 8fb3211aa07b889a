#pragma once

#include <cstddef>

namespace qma {

// Fixed pairwise-tree summation. The tree shape depends only on the length,
// never on worker count or chunking, so sums are bit-identical across runs.
namespace detail {

constexpr std::size_t kPairwiseLeaf = 64;

template <typename F>
double pairwise_sum_impl(std::size_t lo, std::size_t hi, const F& at) {
  const std::size_t len = hi - lo;
  if (len <= kPairwiseLeaf) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += at(i);
    return s;
  }
  const std::size_t mid = lo + len / 2;
  return pairwise_sum_impl(lo, mid, at) + pairwise_sum_impl(mid, hi, at);
}

}  // namespace detail

template <typename F>
double pairwise_sum(std::size_t count, const F& at) {
  if (count == 0) return 0.0;
  return detail::pairwise_sum_impl(0, count, at);
}

inline double pairwise_sum(const double* v, std::size_t count) {
  return pairwise_sum(count, [v](std::size_t i) { return v[i]; });
}

}  // namespace qma
