#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "monoxplain/explain.hpp"
#include "monoxplain/nn.hpp"

namespace monoxplain {

inline constexpr std::size_t kDefaultOracleCap = 20;

/// Exhaustive contrastive search: subsets in increasing size, lexicographic
/// within a size; the first one whose bound substitution flips the
/// prediction is returned. Requires a monotonic network (any activation).
/// Throws Errc::too_large when n > cap and Errc::no_explanation when no
/// subset flips the prediction.
Explanation brute_force_contrastive(const Fcn& fcn, const Domain& domain,
                                    std::span<const double> x,
                                    std::size_t cap = kDefaultOracleCap);

/// Exhaustive abductive search in the same order: the first S such that
/// fixing S and moving every other feature to the adversarial bound keeps
/// the prediction.
Explanation brute_force_abductive(const Fcn& fcn, const Domain& domain,
                                  std::span<const double> x,
                                  std::size_t cap = kDefaultOracleCap);

Explanation brute_force(const Fcn& fcn, const Domain& domain,
                        std::span<const double> x, ExplanationKind kind,
                        std::size_t cap = kDefaultOracleCap);

/// Universe {1..n} with subsets E_1..E_m (stored 1-based) and budget K.
struct SetCoverInstance {
  std::size_t universe_size = 0;
  std::vector<std::vector<std::size_t>> subsets;
  std::size_t budget = 0;

  /// Throws Errc::invalid_instance on empty subsets, out-of-range elements,
  /// a zero budget, or an uncovered universe element.
  void validate() const;
};

/// Parses "n m K" followed by m lines of 1-based element indices.
SetCoverInstance parse_set_cover(std::string_view text);
std::string format_set_cover(const SetCoverInstance& inst);

/// Random covering instance; identical seeds give identical instances.
SetCoverInstance random_set_cover(std::size_t universe_size,
                                  std::size_t subset_count, std::size_t budget,
                                  std::uint64_t seed);

/// Two-layer step network whose minimum contrastive explanation at 0_m (and
/// minimum abductive explanation at 1_m) is the minimum set cover.
struct SetCoverEncoding {
  Fcn fcn;
  Domain domain;
  std::vector<double> mcr_input;  // 0_m
  std::vector<double> msr_input;  // 1_m
  std::size_t k;
};

SetCoverEncoding encode_set_cover(const SetCoverInstance& inst);

/// Exact minimum cover size by exhaustive search. Throws Errc::too_large
/// when m > cap.
std::size_t solve_set_cover(const SetCoverInstance& inst,
                            std::size_t cap = kDefaultOracleCap);

}  // namespace monoxplain
