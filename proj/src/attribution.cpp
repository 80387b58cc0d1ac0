#include "monoxplain/attribution.hpp"

#include <fmt/format.h>

#include "monoxplain/error.hpp"

namespace monoxplain {

AttributionResult integrated_gradients(const Fcn& fcn,
                                       std::span<const double> x,
                                       std::span<const double> baseline,
                                       std::size_t steps) {
  if (steps == 0) {
    throw Error(Errc::invalid_argument, "integrated gradients needs steps >= 1");
  }
  if (x.size() != baseline.size()) {
    throw Error(Errc::shape,
                fmt::format("input length {} differs from baseline length {}",
                            x.size(), baseline.size()));
  }
  if (!check_admissible(fcn)) {
    throw Error(Errc::not_differentiable,
                "integrated gradients requires admissible activations");
  }

  const std::size_t n = x.size();
  std::vector<double> sum(n, 0.0);
  std::vector<double> point(n);
  for (std::size_t s = 0; s < steps; ++s) {
    const double tau = (static_cast<double>(s) + 0.5) / static_cast<double>(steps);
    for (std::size_t i = 0; i < n; ++i) {
      point[i] = baseline[i] + tau * (x[i] - baseline[i]);
    }
    const std::vector<double> g = gradient(fcn, point);
    for (std::size_t i = 0; i < n; ++i) sum[i] += g[i];
  }

  AttributionResult result;
  result.steps = steps;
  result.baseline.assign(baseline.begin(), baseline.end());
  result.contributions.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    result.contributions[i] =
        (x[i] - baseline[i]) * (sum[i] / static_cast<double>(steps));
  }
  return result;
}

}  // namespace monoxplain
