#pragma once

#include <vector>

namespace shearstab {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

// Cached per order; safe to call concurrently.
const GaussRule& gauss_legendre(int order);

// Pairwise summation keeps reductions deterministic and accurate.
template <class T>
T pairwise_sum(const T* values, std::size_t n, const T& zero) {
  if (n == 0) return zero;
  if (n <= 8) {
    T s = values[0];
    for (std::size_t i = 1; i < n; ++i) s += values[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(values, h, zero) + pairwise_sum(values + h, n - h, zero);
}

template <class T>
T pairwise_sum(const std::vector<T>& values, const T& zero) {
  return pairwise_sum(values.data(), values.size(), zero);
}

}  // namespace shearstab
