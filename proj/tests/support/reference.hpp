#pragma once

// Independent checks used as test oracles. Nothing here calls into the
// greedy or the library's exhaustive search.

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "monoxplain/nn.hpp"

namespace monoxplain::testing {

/// Central finite difference of forward() along coordinate i.
inline double central_difference(const Fcn& fcn, std::span<const double> x,
                                 std::size_t i, double h = 1e-6) {
  std::vector<double> plus(x.begin(), x.end());
  std::vector<double> minus(x.begin(), x.end());
  plus[i] += h;
  minus[i] -= h;
  return (forward(fcn, plus) - forward(fcn, minus)) / (2.0 * h);
}

/// Bitmask enumeration over all 2^n subsets (no size ordering): the minimum
/// popcount of a subset whose bound substitution flips the prediction, or
/// -1 when none does.
inline int min_contrastive_by_mask(const Fcn& fcn, const Domain& domain,
                                   std::span<const double> x) {
  const std::size_t n = x.size();
  const bool p = classify(fcn, x);
  const auto bound = p ? domain.lower() : domain.upper();
  int best = -1;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
    const int size = std::popcount(mask);
    if (best >= 0 && size >= best) continue;
    std::vector<double> y(x.begin(), x.end());
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::uint32_t{1} << i)) y[i] = bound[i];
    }
    if (classify(fcn, y) != p) best = size;
  }
  return best;
}

/// Same for abductive explanations: the minimum popcount of a kept set S
/// such that the complement at the adversarial bound keeps the prediction.
inline int min_abductive_by_mask(const Fcn& fcn, const Domain& domain,
                                 std::span<const double> x) {
  const std::size_t n = x.size();
  const bool p = classify(fcn, x);
  const auto bound = p ? domain.lower() : domain.upper();
  int best = -1;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    const int size = std::popcount(mask);
    if (best >= 0 && size >= best) continue;
    std::vector<double> y(bound.begin(), bound.end());
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::uint32_t{1} << i)) y[i] = x[i];
    }
    if (classify(fcn, y) == p) best = size;
  }
  return best;
}

}  // namespace monoxplain::testing
