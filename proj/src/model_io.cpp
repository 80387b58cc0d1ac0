#include "monoxplain/model_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "monoxplain/error.hpp"

namespace monoxplain {

using nlohmann::json;

namespace {

const json& field(const json& obj, const char* name, std::string_view where) {
  const auto it = obj.find(name);
  if (it == obj.end()) {
    throw Error(Errc::schema,
                fmt::format("{}: missing field '{}'", where, name));
  }
  return *it;
}

std::size_t count_field(const json& obj, const char* name,
                        std::string_view where) {
  const json& v = field(obj, name, where);
  if (!v.is_number_unsigned()) {
    throw Error(Errc::schema, fmt::format("{}: '{}' must be a non-negative "
                                          "integer",
                                          where, name));
  }
  return v.get<std::size_t>();
}

double real_value(const json& v, std::string_view where) {
  if (!v.is_number()) {
    throw Error(Errc::schema, fmt::format("{}: expected a number", where));
  }
  return v.get<double>();
}

std::vector<double> real_array(const json& obj, const char* name,
                               std::string_view where) {
  const json& v = field(obj, name, where);
  if (!v.is_array()) {
    throw Error(Errc::schema,
                fmt::format("{}: '{}' must be an array", where, name));
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (const json& e : v) {
    out.push_back(real_value(e, fmt::format("{}.{}", where, name)));
  }
  return out;
}

Activation::Kind parse_kind(const json& v, std::string_view where) {
  if (!v.is_string()) {
    throw Error(Errc::schema,
                fmt::format("{}: 'activation' must be a string", where));
  }
  const auto& tag = v.get_ref<const std::string&>();
  for (auto kind : {Activation::Kind::relu, Activation::Kind::sigmoid,
                    Activation::Kind::tanh, Activation::Kind::identity,
                    Activation::Kind::step}) {
    if (tag == to_string(kind)) return kind;
  }
  throw Error(Errc::unknown_activation,
              fmt::format("{}: unknown activation '{}'", where, tag));
}

Layer parse_layer(const json& obj, std::size_t index) {
  const std::string where = fmt::format("layers[{}]", index);
  if (!obj.is_object()) {
    throw Error(Errc::schema, fmt::format("{}: expected an object", where));
  }
  const std::size_t rows = count_field(obj, "rows", where);
  const std::size_t cols = count_field(obj, "cols", where);
  std::vector<double> weights = real_array(obj, "weights", where);
  std::vector<double> bias = real_array(obj, "bias", where);

  Activation act;
  act.kind = parse_kind(field(obj, "activation", where), where);
  if (act.kind == Activation::Kind::step) {
    act.step_threshold =
        real_value(field(obj, "step_threshold", where), where + ".step_threshold");
  }

  if (rows == 0 || cols == 0 || weights.size() != rows * cols) {
    throw Error(Errc::shape_inconsistency,
                fmt::format("{}: {} weights for a {}x{} layer", where,
                            weights.size(), rows, cols));
  }
  if (bias.size() != rows) {
    throw Error(Errc::shape_inconsistency,
                fmt::format("{}: bias has length {}, rows = {}", where,
                            bias.size(), rows));
  }
  return Layer(rows, cols, std::move(weights), std::move(bias), act);
}

}  // namespace

Model load_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(Errc::schema, fmt::format("model is not valid JSON: {}", e.what()));
  }
  if (!doc.is_object()) {
    throw Error(Errc::schema, "model document must be a JSON object");
  }

  const json& version = field(doc, "schema_version", "model");
  if (!version.is_number_integer()) {
    throw Error(Errc::schema, "model: 'schema_version' must be an integer");
  }
  if (version.get<long long>() != kModelSchemaVersion) {
    throw Error(Errc::unsupported_version,
                fmt::format("model schema_version {} is not supported (expected "
                            "{})",
                            version.get<long long>(), kModelSchemaVersion));
  }

  const std::size_t input_dim = count_field(doc, "input_dim", "model");
  const json& layers_json = field(doc, "layers", "model");
  if (!layers_json.is_array() || layers_json.empty()) {
    throw Error(Errc::schema, "model: 'layers' must be a non-empty array");
  }
  std::vector<Layer> layers;
  for (std::size_t i = 0; i < layers_json.size(); ++i) {
    layers.push_back(parse_layer(layers_json[i], i));
  }
  const double threshold = real_value(field(doc, "classification_threshold", "model"),
                                      "model.classification_threshold");

  const json& dom = field(doc, "domain", "model");
  if (!dom.is_object()) {
    throw Error(Errc::schema, "model: 'domain' must be an object");
  }
  std::vector<double> lower = real_array(dom, "lower", "domain");
  std::vector<double> upper = real_array(dom, "upper", "domain");
  if (lower.size() != input_dim || upper.size() != input_dim) {
    throw Error(Errc::shape_inconsistency,
                fmt::format("domain bounds have lengths {} and {}, input_dim = {}",
                            lower.size(), upper.size(), input_dim));
  }

  try {
    return Model{Fcn(input_dim, std::move(layers), threshold),
                 Domain(std::move(lower), std::move(upper))};
  } catch (const Error& e) {
    if (e.code() == Errc::shape) throw Error(Errc::shape_inconsistency, e.what());
    throw;
  }
}

std::string save_model(const Fcn& fcn, const Domain& domain) {
  if (!std::isfinite(fcn.threshold())) {
    throw Error(Errc::invalid_argument,
                "a non-finite classification threshold cannot be serialized");
  }
  json doc;
  doc["schema_version"] = kModelSchemaVersion;
  doc["input_dim"] = fcn.input_dim();
  json layers = json::array();
  for (const Layer& layer : fcn.layers()) {
    json l;
    l["rows"] = layer.rows();
    l["cols"] = layer.cols();
    l["weights"] = std::vector<double>(layer.weights().begin(), layer.weights().end());
    l["bias"] = std::vector<double>(layer.bias().begin(), layer.bias().end());
    l["activation"] = std::string(to_string(layer.activation().kind));
    if (layer.activation().kind == Activation::Kind::step) {
      l["step_threshold"] = layer.activation().step_threshold;
    }
    layers.push_back(std::move(l));
  }
  doc["layers"] = std::move(layers);
  doc["classification_threshold"] = fcn.threshold();
  doc["domain"]["lower"] =
      std::vector<double>(domain.lower().begin(), domain.lower().end());
  doc["domain"]["upper"] =
      std::vector<double>(domain.upper().begin(), domain.upper().end());
  return doc.dump(2) + "\n";
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> cells;
  while (true) {
    const auto comma = line.find(',');
    cells.push_back(trim(line.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return cells;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

double parse_cell(std::string_view cell, std::size_t line, std::size_t column) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size() ||
      !std::isfinite(value)) {
    throw Error(Errc::parse, fmt::format("row {}, column {}: '{}' is not a "
                                         "finite number",
                                         line, column, cell));
  }
  return value;
}

}  // namespace

Dataset load_dataset(std::string_view text, const Domain& domain) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  const auto lines = split_lines(text);
  if (lines.empty() || trim(lines[0]).empty()) {
    throw Error(Errc::parse, "dataset has no header row");
  }

  Dataset data;
  const auto header = split_csv_line(lines[0]);
  const bool has_label = header.back() == "label";
  const std::size_t features = header.size() - (has_label ? 1 : 0);
  if (features != domain.size()) {
    throw Error(Errc::column_mismatch,
                fmt::format("header has {} feature columns, model expects {}",
                            features, domain.size()));
  }
  for (std::size_t c = 0; c < features; ++c) {
    data.feature_names.emplace_back(header[c]);
  }

  for (std::size_t l = 1; l < lines.size(); ++l) {
    if (trim(lines[l]).empty()) continue;
    const std::size_t row = l + 1;  // 1-based line number in the file
    const auto cells = split_csv_line(lines[l]);
    if (cells.size() != header.size()) {
      throw Error(Errc::column_mismatch,
                  fmt::format("row {}: {} columns, header has {}", row,
                              cells.size(), header.size()));
    }
    InstanceRecord rec;
    rec.features.reserve(features);
    for (std::size_t c = 0; c < features; ++c) {
      double v = parse_cell(cells[c], row, c + 1);
      if (v < domain.lower()[c]) {
        v = domain.lower()[c];
        ++data.clamped_count;
      } else if (v > domain.upper()[c]) {
        v = domain.upper()[c];
        ++data.clamped_count;
      }
      rec.features.push_back(v);
    }
    if (has_label && !cells.back().empty()) {
      rec.label = parse_cell(cells.back(), row, header.size());
    }
    data.records.push_back(std::move(rec));
  }
  return data;
}

std::string write_dataset(std::span<const InstanceRecord> records,
                          std::size_t input_dim) {
  const bool labelled = std::ranges::any_of(
      records, [](const InstanceRecord& r) { return r.label.has_value(); });
  std::string out;
  for (std::size_t i = 0; i < input_dim; ++i) {
    if (i > 0) out += ',';
    out += fmt::format("x{}", i + 1);
  }
  if (labelled) out += ",label";
  out += '\n';
  for (const InstanceRecord& r : records) {
    for (std::size_t i = 0; i < r.features.size(); ++i) {
      if (i > 0) out += ',';
      out += format_real(r.features[i]);
    }
    if (labelled) {
      out += ',';
      if (r.label) out += format_real(*r.label);
    }
    out += '\n';
  }
  return out;
}

std::string format_real(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string write_results(std::span<const ExplanationRecord> records) {
  std::string out(kResultsHeader);
  out += '\n';
  for (const ExplanationRecord& r : records) {
    std::string indices;
    for (std::size_t i = 0; i < r.indices.size(); ++i) {
      if (i > 0) indices += ';';
      indices += std::to_string(r.indices[i] + 1);
    }
    out += fmt::format("{},{},{},{},{},{},{:.6f},{}\n", r.instance_index,
                       to_string(r.kind), r.size, indices,
                       r.prediction ? 1 : 0, format_real(r.threshold),
                       r.wall_time_s, r.eval_count);
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::io, fmt::format("cannot open '{}' for reading", path.string()));
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(Errc::io, fmt::format("cannot open '{}' for writing", path.string()));
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw Error(Errc::io, fmt::format("failed writing '{}'", path.string()));
  }
}

}  // namespace monoxplain
