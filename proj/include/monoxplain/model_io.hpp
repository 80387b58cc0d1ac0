#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "monoxplain/explain.hpp"
#include "monoxplain/nn.hpp"

namespace monoxplain {

inline constexpr int kModelSchemaVersion = 1;

struct Model {
  Fcn fcn;
  Domain domain;
};

/// Parses a schema-version-1 model document (JSON).
///
/// Distinct error codes: Errc::schema for malformed documents or wrongly
/// typed fields, Errc::unsupported_version, Errc::unknown_activation and
/// Errc::shape_inconsistency for arrays that do not match rows/cols/n.
Model load_model(std::string_view text);

/// Serializes with round-trip precision, so load_model(save_model(m)) == m
/// bit for bit.
std::string save_model(const Fcn& fcn, const Domain& domain);

struct InstanceRecord {
  std::vector<double> features;
  std::optional<double> label;
};

struct Dataset {
  std::vector<std::string> feature_names;
  std::vector<InstanceRecord> records;
  // Number of cells moved onto a domain bound.
  std::size_t clamped_count = 0;
};

/// Reads a CSV with a header row. A final column named "label" is taken as
/// the label; every other column is a feature and must match the domain
/// dimension. Values outside the domain are clamped and counted.
Dataset load_dataset(std::string_view text, const Domain& domain);

std::string write_dataset(std::span<const InstanceRecord> records,
                          std::size_t input_dim);

struct ExplanationRecord {
  std::size_t instance_index = 0;
  ExplanationKind kind = ExplanationKind::contrastive;
  // -1 when no explanation exists for the instance.
  long size = 0;
  std::vector<std::size_t> indices;  // 0-based, ascending
  bool prediction = false;
  double threshold = 0.0;
  double wall_time_s = 0.0;
  std::size_t eval_count = 0;
};

inline constexpr std::string_view kResultsHeader =
    "instance,kind,size,indices,prediction,threshold,wall_time_s,eval_count";

/// Results CSV; feature indices are written 1-based and joined with ';'.
std::string write_results(std::span<const ExplanationRecord> records);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_real(double value);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace monoxplain
