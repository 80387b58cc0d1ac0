#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "monoxplain/nn.hpp"

namespace monoxplain {

inline constexpr std::size_t kDefaultAttributionSteps = 256;

struct AttributionResult {
  std::vector<double> contributions;
  std::size_t steps = 0;
  std::vector<double> baseline;
};

/// Integrated gradients along the straight path from `baseline` to `x`.
///
/// The path integral of each gradient component is approximated with the
/// midpoint rule on `steps` equal subintervals, then scaled by
/// (x_i - baseline_i). Throws Errc::not_differentiable for step networks
/// and Errc::invalid_argument when steps == 0.
AttributionResult integrated_gradients(
    const Fcn& fcn, std::span<const double> x, std::span<const double> baseline,
    std::size_t steps = kDefaultAttributionSteps);

}  // namespace monoxplain
