#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "monoxplain/nn.hpp"

namespace monoxplain {

enum class ExplanationKind { contrastive, abductive };

std::string_view to_string(ExplanationKind kind) noexcept;

/// A feature set together with the bound vector it was checked against.
///
/// Indices are 0-based and sorted ascending. For a contrastive explanation,
/// replacing the features in `indices` by `substitution_target` flips the
/// prediction. For an abductive explanation, replacing every feature *not*
/// in `indices` by `substitution_target` keeps the prediction.
struct Explanation {
  ExplanationKind kind = ExplanationKind::contrastive;
  std::vector<std::size_t> indices;
  std::vector<double> substitution_target;
  bool original_prediction = false;
  std::size_t eval_count = 0;
};

/// How equal first-loop scores are ordered.
enum class TieOrder { ascending_index, descending_index };

struct GreedyOptions {
  TieOrder tie_order = TieOrder::ascending_index;
};

/// The ordering phase of the greedy, exposed so tests can inspect each step.
///
/// The second loop starts from `start` and copies components of `source`
/// into it in `order` until the prediction of the modified vector differs
/// from `start_prediction`. For contrastive explanations start = x and
/// source = the adversarial bound; for abductive ones the two are swapped.
struct GreedyPlan {
  ExplanationKind kind = ExplanationKind::contrastive;
  bool original_prediction = false;
  std::vector<double> bound;   // l when x is classified 1, else u
  std::vector<double> start;
  std::vector<double> source;
  bool start_prediction = false;
  std::vector<double> scores;  // output after substituting one feature
  std::vector<std::size_t> order;
  std::size_t eval_count = 0;
};

/// Builds the plan without checking monotonicity or admissibility.
GreedyPlan plan_greedy(const Fcn& fcn, const Domain& domain,
                       std::span<const double> x, ExplanationKind kind,
                       const GreedyOptions& options = {});

/// Cardinality-minimal contrastive explanation for a monotonic network with
/// admissible activations. Throws Errc::precondition when either property
/// fails and Errc::no_explanation when the prediction is constant over the
/// domain box.
Explanation contrastive_explain(const Fcn& fcn, const Domain& domain,
                                std::span<const double> x,
                                const GreedyOptions& options = {});

/// Cardinality-minimal abductive explanation; the empty set when the
/// prediction already holds at the adversarial bound.
Explanation abductive_explain(const Fcn& fcn, const Domain& domain,
                              std::span<const double> x,
                              const GreedyOptions& options = {});

Explanation explain(const Fcn& fcn, const Domain& domain,
                    std::span<const double> x, ExplanationKind kind,
                    const GreedyOptions& options = {});

/// Is there a contrastive explanation with at most k features? (1 <= k <= n)
bool mcr_query(const Fcn& fcn, const Domain& domain, std::span<const double> x,
               std::size_t k);

/// Is there an abductive explanation with at most k features? (1 <= k <= n)
bool msr_query(const Fcn& fcn, const Domain& domain, std::span<const double> x,
               std::size_t k);

/// Is the minimum contrastive explanation at least k features? A constant
/// prediction counts as robust for every k.
bool d_robust(const Fcn& fcn, const Domain& domain, std::span<const double> x,
              std::size_t k);

/// Copy of `fcn` classifying at threshold `t` instead.
Fcn with_threshold(const Fcn& fcn, double t);

/// x with the components listed in `indices` taken from `source`.
std::vector<double> substitute(std::span<const double> x,
                               std::span<const std::size_t> indices,
                               std::span<const double> source);

/// x with every component *not* listed in `indices` taken from `source`.
std::vector<double> substitute_complement(std::span<const double> x,
                                          std::span<const std::size_t> indices,
                                          std::span<const double> source);

namespace detail {

/// Runs the greedy on any network; the public entry points add the
/// monotonicity and admissibility guards on top of this.
Explanation run_greedy(const Fcn& fcn, const Domain& domain,
                       std::span<const double> x, ExplanationKind kind,
                       const GreedyOptions& options);

}  // namespace detail

}  // namespace monoxplain
