#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "monoxplain/error.hpp"
#include "monoxplain/explain.hpp"
#include "monoxplain/model_io.hpp"
#include "monoxplain/nn.hpp"
#include "monoxplain/oracle.hpp"

namespace monoxplain::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInternalOrIo = 1,
  kPreconditionOrConfig = 2,
  kNoExplanation = 3,
};

/// Exit code for a library error.
int exit_code_for(Errc code) noexcept;

struct SweepSpec {
  double start = 0.0;
  double stop = 0.0;
  std::size_t count = 0;

  /// `count` evenly spaced thresholds from start to stop inclusive.
  std::vector<double> thresholds() const;
};

/// Parses "start:stop:count"; count must be at least 2.
SweepSpec parse_sweep(std::string_view text);

struct RunConfig {
  std::string command;
  std::filesystem::path model_path;
  std::optional<std::filesystem::path> dataset_path;
  std::optional<std::filesystem::path> output_path;
  std::optional<std::string> input;
  std::optional<std::size_t> row;
  // Empty means both kinds where a command supports it.
  std::optional<ExplanationKind> kind;
  std::optional<std::size_t> k;
  std::optional<double> threshold_override;
  std::optional<SweepSpec> sweep;
  bool below_threshold_only = false;
  std::size_t workers = 1;
  std::uint64_t seed = 0;
  std::size_t oracle_cap = kDefaultOracleCap;
  // gen-setcover sizes for seeded generation
  std::size_t universe_size = 8;
  std::size_t subset_count = 10;
  std::size_t budget = 3;
};

using Explainer = std::function<Explanation(const Fcn&, const Domain&,
                                            std::span<const double>,
                                            ExplanationKind)>;

/// The production greedy (`explain` with default options).
Explanation default_explainer(const Fcn& fcn, const Domain& domain,
                              std::span<const double> x, ExplanationKind kind);

/// Explains every record with `workers` threads. Output order follows input
/// order; rows without an explanation carry size -1.
std::vector<ExplanationRecord> explain_batch(
    const Fcn& fcn, const Domain& domain,
    std::span<const InstanceRecord> records, ExplanationKind kind,
    std::size_t workers, const Explainer& explainer = default_explainer);

struct SizeTimeSummary {
  std::size_t count = 0;  // records with an explanation
  double mean_size = 0, median_size = 0, min_size = 0, max_size = 0;
  double mean_time = 0, median_time = 0, min_time = 0, max_time = 0;
};

SizeTimeSummary summarize(std::span<const ExplanationRecord> records);

int cmd_info(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_explain(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_batch(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err,
               const Explainer& explainer = default_explainer);
int cmd_gen_setcover(const RunConfig& config, std::ostream& out,
                     std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses `args` (without the program name) and dispatches to a command.
int run(std::span<const std::string> args, std::ostream& out,
        std::ostream& err);

}  // namespace monoxplain::cli
