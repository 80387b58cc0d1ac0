#include "monoxplain/oracle.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "monoxplain/error.hpp"

namespace monoxplain {

namespace {

void require_oracle_input(const Fcn& fcn, const Domain& domain,
                          std::span<const double> x, std::size_t cap) {
  if (domain.size() != fcn.input_dim() || x.size() != fcn.input_dim()) {
    throw Error(Errc::shape, "input, domain and network dimensions differ");
  }
  if (fcn.input_dim() > cap) {
    throw Error(Errc::too_large,
                fmt::format("exhaustive search over {} features exceeds the "
                            "oracle cap of {}",
                            fcn.input_dim(), cap));
  }
  if (!check_monotonic(fcn)) {
    throw Error(Errc::precondition,
                "exhaustive search assumes a monotonic network");
  }
  if (!domain.contains(x)) {
    throw Error(Errc::precondition, "input lies outside the domain bounds");
  }
}

// Advances `combo` (strictly increasing, values < n) to the next
// lexicographic combination of the same size. Returns false at the end.
bool next_combination(std::vector<std::size_t>& combo, std::size_t n) {
  const std::size_t k = combo.size();
  std::size_t i = k;
  while (i > 0) {
    --i;
    if (combo[i] < n - k + i) {
      ++combo[i];
      for (std::size_t j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// Calls accept(S) on subsets in size-major, lexicographic-minor order
// starting at `min_size`; returns as soon as accept returns true.
template <typename Accept>
bool enumerate_subsets(std::size_t n, std::size_t min_size, Accept&& accept) {
  for (std::size_t k = min_size; k <= n; ++k) {
    std::vector<std::size_t> combo(k);
    for (std::size_t i = 0; i < k; ++i) combo[i] = i;
    do {
      if (accept(combo)) return true;
    } while (next_combination(combo, n));
  }
  return false;
}

}  // namespace

Explanation brute_force_contrastive(const Fcn& fcn, const Domain& domain,
                                    std::span<const double> x,
                                    std::size_t cap) {
  require_oracle_input(fcn, domain, x, cap);
  Explanation result;
  result.kind = ExplanationKind::contrastive;
  result.original_prediction = classify(fcn, x);
  result.eval_count = 1;
  const auto bound =
      result.original_prediction ? domain.lower() : domain.upper();
  result.substitution_target.assign(bound.begin(), bound.end());

  const bool found = enumerate_subsets(
      fcn.input_dim(), 1, [&](const std::vector<std::size_t>& s) {
        ++result.eval_count;
        if (classify(fcn, substitute(x, s, bound)) != result.original_prediction) {
          result.indices = s;
          return true;
        }
        return false;
      });
  if (!found) {
    throw Error(Errc::no_explanation,
                "no subset substitution changes the prediction");
  }
  return result;
}

Explanation brute_force_abductive(const Fcn& fcn, const Domain& domain,
                                  std::span<const double> x,
                                  std::size_t cap) {
  require_oracle_input(fcn, domain, x, cap);
  Explanation result;
  result.kind = ExplanationKind::abductive;
  result.original_prediction = classify(fcn, x);
  result.eval_count = 1;
  const auto bound =
      result.original_prediction ? domain.lower() : domain.upper();
  result.substitution_target.assign(bound.begin(), bound.end());

  const bool found = enumerate_subsets(
      fcn.input_dim(), 0, [&](const std::vector<std::size_t>& s) {
        ++result.eval_count;
        if (classify(fcn, substitute_complement(x, s, bound)) ==
            result.original_prediction) {
          result.indices = s;
          return true;
        }
        return false;
      });
  if (!found) {
    // S = all features reproduces x itself, so this cannot happen.
    throw Error(Errc::internal, "no abductive subset found, not even the full set");
  }
  return result;
}

Explanation brute_force(const Fcn& fcn, const Domain& domain,
                        std::span<const double> x, ExplanationKind kind,
                        std::size_t cap) {
  return kind == ExplanationKind::contrastive
             ? brute_force_contrastive(fcn, domain, x, cap)
             : brute_force_abductive(fcn, domain, x, cap);
}

void SetCoverInstance::validate() const {
  if (universe_size == 0) {
    throw Error(Errc::invalid_instance, "set cover universe is empty");
  }
  if (subsets.empty()) {
    throw Error(Errc::invalid_instance, "set cover instance has no subsets");
  }
  if (budget == 0) {
    throw Error(Errc::invalid_instance, "set cover budget must be positive");
  }
  std::vector<bool> covered(universe_size, false);
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    if (subsets[i].empty()) {
      throw Error(Errc::invalid_instance,
                  fmt::format("subset E_{} is empty", i + 1));
    }
    for (std::size_t e : subsets[i]) {
      if (e < 1 || e > universe_size) {
        throw Error(Errc::invalid_instance,
                    fmt::format("subset E_{} contains {} outside 1..{}", i + 1,
                                e, universe_size));
      }
      covered[e - 1] = true;
    }
  }
  const auto gap = std::ranges::find(covered, false);
  if (gap != covered.end()) {
    throw Error(Errc::invalid_instance,
                fmt::format("element {} is not covered by any subset",
                            (gap - covered.begin()) + 1));
  }
}

namespace {

std::size_t parse_count(std::string_view token, std::size_t line) {
  std::size_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw Error(Errc::parse, fmt::format("line {}: '{}' is not a non-negative "
                                         "integer",
                                         line, token));
  }
  return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

SetCoverInstance parse_set_cover(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  // Trailing blank lines carry no subsets.
  while (!lines.empty() && split_ws(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw Error(Errc::parse, "set cover file is empty");

  const auto header = split_ws(lines[0]);
  if (header.size() != 3) {
    throw Error(Errc::parse, "line 1: expected 'n m K'");
  }
  SetCoverInstance inst;
  inst.universe_size = parse_count(header[0], 1);
  const std::size_t m = parse_count(header[1], 1);
  inst.budget = parse_count(header[2], 1);
  if (lines.size() - 1 != m) {
    throw Error(Errc::parse, fmt::format("header announces {} subsets, found {}",
                                         m, lines.size() - 1));
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::size_t> subset;
    for (std::string_view tok : split_ws(lines[i])) {
      subset.push_back(parse_count(tok, i + 1));
    }
    inst.subsets.push_back(std::move(subset));
  }
  inst.validate();
  return inst;
}

std::string format_set_cover(const SetCoverInstance& inst) {
  std::string out = fmt::format("{} {} {}\n", inst.universe_size,
                                inst.subsets.size(), inst.budget);
  for (const auto& subset : inst.subsets) {
    out += fmt::format("{}\n", fmt::join(subset, " "));
  }
  return out;
}

SetCoverInstance random_set_cover(std::size_t universe_size,
                                  std::size_t subset_count, std::size_t budget,
                                  std::uint64_t seed) {
  if (universe_size == 0 || subset_count == 0 || budget == 0) {
    throw Error(Errc::invalid_argument,
                "random set cover needs positive n, m and K");
  }
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution member(0.35);
  std::uniform_int_distribution<std::size_t> pick_subset(0, subset_count - 1);
  std::uniform_int_distribution<std::size_t> pick_element(1, universe_size);

  std::vector<std::vector<bool>> incidence(subset_count,
                                           std::vector<bool>(universe_size));
  for (auto& row : incidence) {
    for (std::size_t e = 0; e < universe_size; ++e) row[e] = member(rng);
  }
  for (std::size_t e = 0; e < universe_size; ++e) {
    const bool covered = std::ranges::any_of(
        incidence, [e](const std::vector<bool>& row) { return row[e]; });
    if (!covered) incidence[pick_subset(rng)][e] = true;
  }
  for (auto& row : incidence) {
    if (std::ranges::none_of(row, [](bool b) { return b; })) {
      row[pick_element(rng) - 1] = true;
    }
  }

  SetCoverInstance inst;
  inst.universe_size = universe_size;
  inst.budget = budget;
  for (const auto& row : incidence) {
    std::vector<std::size_t> subset;
    for (std::size_t e = 0; e < universe_size; ++e) {
      if (row[e]) subset.push_back(e + 1);
    }
    inst.subsets.push_back(std::move(subset));
  }
  return inst;
}

SetCoverEncoding encode_set_cover(const SetCoverInstance& inst) {
  inst.validate();
  const std::size_t n = inst.universe_size;
  const std::size_t m = inst.subsets.size();

  std::vector<double> incidence(n * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t e : inst.subsets[i]) incidence[(e - 1) * m + i] = 1.0;
  }
  // z > 0 expressed as z >= smallest positive double.
  const double strictly_positive =
      std::nextafter(0.0, std::numeric_limits<double>::infinity());
  Layer hidden(n, m, std::move(incidence), std::vector<double>(n, 0.0),
               Activation::step(strictly_positive));
  Layer output(1, n, std::vector<double>(n, 1.0), {0.0},
               Activation::step(static_cast<double>(n)));

  std::vector<Layer> layers;
  layers.push_back(std::move(hidden));
  layers.push_back(std::move(output));
  return SetCoverEncoding{
      .fcn = Fcn(m, std::move(layers), 0.5),
      .domain = Domain::unit(m),
      .mcr_input = std::vector<double>(m, 0.0),
      .msr_input = std::vector<double>(m, 1.0),
      .k = inst.budget,
  };
}

std::size_t solve_set_cover(const SetCoverInstance& inst, std::size_t cap) {
  inst.validate();
  const std::size_t m = inst.subsets.size();
  if (m > cap) {
    throw Error(Errc::too_large,
                fmt::format("exhaustive set cover over {} subsets exceeds the "
                            "cap of {}",
                            m, cap));
  }
  // Universe larger than 64 elements: fall back to vector<bool> unions.
  if (inst.universe_size > 64) {
    std::size_t best = m;
    enumerate_subsets(m, 1, [&](const std::vector<std::size_t>& s) {
      std::vector<bool> covered(inst.universe_size, false);
      for (std::size_t i : s) {
        for (std::size_t e : inst.subsets[i]) covered[e - 1] = true;
      }
      if (std::ranges::all_of(covered, [](bool b) { return b; })) {
        best = s.size();
        return true;
      }
      return false;
    });
    return best;
  }
  std::vector<std::uint64_t> masks(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t e : inst.subsets[i]) masks[i] |= std::uint64_t{1} << (e - 1);
  }
  const std::uint64_t full = inst.universe_size == 64
                                 ? ~std::uint64_t{0}
                                 : (std::uint64_t{1} << inst.universe_size) - 1;
  std::size_t best = m;
  enumerate_subsets(m, 1, [&](const std::vector<std::size_t>& s) {
    std::uint64_t u = 0;
    for (std::size_t i : s) u |= masks[i];
    if (u == full) {
      best = s.size();
      return true;
    }
    return false;
  });
  return best;
}

}  // namespace monoxplain
