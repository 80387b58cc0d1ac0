#include "monoxplain/explain.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "monoxplain/error.hpp"

namespace monoxplain {

std::string_view to_string(ExplanationKind kind) noexcept {
  return kind == ExplanationKind::contrastive ? "contrastive" : "abductive";
}

std::vector<double> substitute(std::span<const double> x,
                               std::span<const std::size_t> indices,
                               std::span<const double> source) {
  std::vector<double> out(x.begin(), x.end());
  for (std::size_t i : indices) out[i] = source[i];
  return out;
}

std::vector<double> substitute_complement(std::span<const double> x,
                                          std::span<const std::size_t> indices,
                                          std::span<const double> source) {
  std::vector<double> out(source.begin(), source.end());
  for (std::size_t i : indices) out[i] = x[i];
  return out;
}

namespace {

void require_domain(const Fcn& fcn, const Domain& domain,
                    std::span<const double> x) {
  if (domain.size() != fcn.input_dim()) {
    throw Error(Errc::shape,
                fmt::format("domain has dimension {}, network expects {}",
                            domain.size(), fcn.input_dim()));
  }
  if (x.size() != fcn.input_dim()) {
    throw Error(Errc::shape, fmt::format("input has length {}, network expects {}",
                                         x.size(), fcn.input_dim()));
  }
  if (!domain.contains(x)) {
    throw Error(Errc::precondition, "input lies outside the domain bounds");
  }
}

void require_explainable(const Fcn& fcn) {
  if (!check_monotonic(fcn)) {
    throw Error(Errc::precondition,
                "network is not monotonic: some weight is negative");
  }
  if (!check_admissible(fcn)) {
    throw Error(Errc::precondition,
                "network is not admissible: step activations are not "
                "continuous");
  }
}

void require_k(const Fcn& fcn, std::size_t k) {
  if (k < 1 || k > fcn.input_dim()) {
    throw Error(Errc::invalid_argument,
                fmt::format("k must lie in [1, {}], got {}", fcn.input_dim(), k));
  }
}

}  // namespace

GreedyPlan plan_greedy(const Fcn& fcn, const Domain& domain,
                       std::span<const double> x, ExplanationKind kind,
                       const GreedyOptions& options) {
  require_domain(fcn, domain, x);
  const std::size_t n = fcn.input_dim();

  GreedyPlan plan;
  plan.kind = kind;
  plan.original_prediction = classify(fcn, x);
  plan.eval_count = 1;
  const auto bound = plan.original_prediction ? domain.lower() : domain.upper();
  plan.bound.assign(bound.begin(), bound.end());

  if (kind == ExplanationKind::contrastive) {
    plan.start.assign(x.begin(), x.end());
    plan.source = plan.bound;
    plan.start_prediction = plan.original_prediction;
  } else {
    plan.start = plan.bound;
    plan.source.assign(x.begin(), x.end());
    plan.start_prediction = classify(fcn, plan.start);
    ++plan.eval_count;
    // The bound already agrees with x: nothing needs fixing.
    if (plan.start_prediction == plan.original_prediction) return plan;
  }

  plan.scores.resize(n);
  std::vector<double> probe = plan.start;
  for (std::size_t j = 0; j < n; ++j) {
    probe[j] = plan.source[j];
    plan.scores[j] = forward(fcn, probe);
    probe[j] = plan.start[j];
  }
  plan.eval_count += n;

  plan.order.resize(n);
  std::iota(plan.order.begin(), plan.order.end(), std::size_t{0});
  if (options.tie_order == TieOrder::descending_index) {
    std::ranges::reverse(plan.order);
  }
  // Moving away from class 1 wants the smallest outputs first.
  const bool ascending = plan.start_prediction;
  std::ranges::stable_sort(plan.order, [&](std::size_t a, std::size_t b) {
    return ascending ? plan.scores[a] < plan.scores[b]
                     : plan.scores[a] > plan.scores[b];
  });
  return plan;
}

namespace detail {

Explanation run_greedy(const Fcn& fcn, const Domain& domain,
                       std::span<const double> x, ExplanationKind kind,
                       const GreedyOptions& options) {
  GreedyPlan plan = plan_greedy(fcn, domain, x, kind, options);

  Explanation result;
  result.kind = kind;
  result.original_prediction = plan.original_prediction;
  result.substitution_target = plan.bound;
  result.eval_count = plan.eval_count;

  if (kind == ExplanationKind::abductive &&
      plan.start_prediction == plan.original_prediction) {
    return result;
  }

  std::vector<double> current = plan.start;
  for (std::size_t step = 0; step < plan.order.size(); ++step) {
    const std::size_t j = plan.order[step];
    current[j] = plan.source[j];
    ++result.eval_count;
    if (classify(fcn, current) != plan.start_prediction) {
      result.indices.assign(plan.order.begin(),
                            plan.order.begin() + static_cast<std::ptrdiff_t>(step) + 1);
      std::ranges::sort(result.indices);
      return result;
    }
  }

  if (kind == ExplanationKind::contrastive) {
    throw Error(Errc::no_explanation,
                "prediction is constant over the domain box; no contrastive "
                "explanation exists");
  }
  throw Error(Errc::internal,
              "abductive greedy exhausted all features without restoring the "
              "prediction");
}

}  // namespace detail

Explanation explain(const Fcn& fcn, const Domain& domain,
                    std::span<const double> x, ExplanationKind kind,
                    const GreedyOptions& options) {
  require_explainable(fcn);
  return detail::run_greedy(fcn, domain, x, kind, options);
}

Explanation contrastive_explain(const Fcn& fcn, const Domain& domain,
                                std::span<const double> x,
                                const GreedyOptions& options) {
  return explain(fcn, domain, x, ExplanationKind::contrastive, options);
}

Explanation abductive_explain(const Fcn& fcn, const Domain& domain,
                              std::span<const double> x,
                              const GreedyOptions& options) {
  return explain(fcn, domain, x, ExplanationKind::abductive, options);
}

bool mcr_query(const Fcn& fcn, const Domain& domain, std::span<const double> x,
               std::size_t k) {
  require_k(fcn, k);
  try {
    return contrastive_explain(fcn, domain, x).indices.size() <= k;
  } catch (const Error& e) {
    if (e.code() == Errc::no_explanation) return false;
    throw;
  }
}

bool msr_query(const Fcn& fcn, const Domain& domain, std::span<const double> x,
               std::size_t k) {
  require_k(fcn, k);
  return abductive_explain(fcn, domain, x).indices.size() <= k;
}

bool d_robust(const Fcn& fcn, const Domain& domain, std::span<const double> x,
              std::size_t k) {
  require_k(fcn, k);
  try {
    return contrastive_explain(fcn, domain, x).indices.size() >= k;
  } catch (const Error& e) {
    if (e.code() == Errc::no_explanation) return true;
    throw;
  }
}

Fcn with_threshold(const Fcn& fcn, double t) {
  return Fcn(fcn.input_dim(), fcn.layers(), t);
}

}  // namespace monoxplain
