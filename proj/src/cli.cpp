#include "monoxplain/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fmt/ranges.h>

#include "CLI11.hpp"
#include "monoxplain/error.hpp"

namespace monoxplain::cli {

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::no_explanation:
      return kNoExplanation;
    case Errc::shape:
    case Errc::not_differentiable:
    case Errc::invalid_argument:
    case Errc::precondition:
    case Errc::too_large:
    case Errc::invalid_instance:
      return kPreconditionOrConfig;
    case Errc::schema:
    case Errc::shape_inconsistency:
    case Errc::unknown_activation:
    case Errc::unsupported_version:
    case Errc::parse:
    case Errc::column_mismatch:
    case Errc::io:
    case Errc::internal:
      return kInternalOrIo;
  }
  return kInternalOrIo;
}

std::vector<double> SweepSpec::thresholds() const {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(count - 1);
    out[i] = i + 1 == count ? stop : start + frac * (stop - start);
  }
  return out;
}

namespace {

double parse_real(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(Errc::invalid_argument,
                fmt::format("{}: '{}' is not a number", what, text));
  }
  return value;
}

}  // namespace

SweepSpec parse_sweep(std::string_view text) {
  const auto first = text.find(':');
  const auto second =
      first == std::string_view::npos ? first : text.find(':', first + 1);
  if (second == std::string_view::npos) {
    throw Error(Errc::invalid_argument,
                fmt::format("sweep '{}' is not start:stop:count", text));
  }
  SweepSpec spec;
  spec.start = parse_real(text.substr(0, first), "sweep start");
  spec.stop = parse_real(text.substr(first + 1, second - first - 1), "sweep stop");
  const auto count_text = text.substr(second + 1);
  const auto [ptr, ec] = std::from_chars(
      count_text.data(), count_text.data() + count_text.size(), spec.count);
  if (count_text.empty() || ec != std::errc{} ||
      ptr != count_text.data() + count_text.size()) {
    throw Error(Errc::invalid_argument,
                fmt::format("sweep count '{}' is not an integer", count_text));
  }
  if (spec.count < 2) {
    throw Error(Errc::invalid_argument, "sweep count must be at least 2");
  }
  return spec;
}

Explanation default_explainer(const Fcn& fcn, const Domain& domain,
                              std::span<const double> x,
                              ExplanationKind kind) {
  return explain(fcn, domain, x, kind);
}

std::vector<ExplanationRecord> explain_batch(
    const Fcn& fcn, const Domain& domain,
    std::span<const InstanceRecord> records, ExplanationKind kind,
    std::size_t workers, const Explainer& explainer) {
  if (workers == 0) {
    throw Error(Errc::invalid_argument, "workers must be at least 1");
  }
  // Model-level preconditions fail once, not per row.
  if (!check_monotonic(fcn)) {
    throw Error(Errc::precondition,
                "network is not monotonic: some weight is negative");
  }
  if (!check_admissible(fcn)) {
    throw Error(Errc::precondition,
                "network is not admissible: step activations are not "
                "continuous");
  }

  std::vector<ExplanationRecord> results(records.size());
  std::vector<std::exception_ptr> failures(records.size());
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < records.size();
         i = next.fetch_add(1)) {
      ExplanationRecord& rec = results[i];
      rec.instance_index = i;
      rec.kind = kind;
      rec.threshold = fcn.threshold();
      const auto begin = std::chrono::steady_clock::now();
      try {
        const Explanation e = explainer(fcn, domain, records[i].features, kind);
        rec.size = static_cast<long>(e.indices.size());
        rec.indices = e.indices;
        rec.prediction = e.original_prediction;
        rec.eval_count = e.eval_count;
      } catch (const Error& e) {
        if (e.code() != Errc::no_explanation) {
          failures[i] = std::current_exception();
        }
        rec.size = -1;
        rec.prediction = classify(fcn, records[i].features);
        // Greedy spends 1 + n evaluations plus n flip checks before giving up.
        rec.eval_count = 2 * fcn.input_dim() + 1;
      } catch (...) {
        failures[i] = std::current_exception();
      }
      rec.wall_time_s = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - begin)
                            .count();
    }
  };

  const std::size_t threads = std::min(workers, std::max<std::size_t>(records.size(), 1));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return results;
}

namespace {

double median_of(std::vector<double> v) {
  std::ranges::sort(v);
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

SizeTimeSummary summarize(std::span<const ExplanationRecord> records) {
  std::vector<double> sizes;
  std::vector<double> times;
  for (const auto& r : records) {
    if (r.size < 0) continue;
    sizes.push_back(static_cast<double>(r.size));
    times.push_back(r.wall_time_s);
  }
  SizeTimeSummary s;
  s.count = sizes.size();
  if (sizes.empty()) return s;
  const auto mean = [](const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
  };
  s.mean_size = mean(sizes);
  s.median_size = median_of(sizes);
  s.min_size = *std::ranges::min_element(sizes);
  s.max_size = *std::ranges::max_element(sizes);
  s.mean_time = mean(times);
  s.median_time = median_of(times);
  s.min_time = *std::ranges::min_element(times);
  s.max_time = *std::ranges::max_element(times);
  return s;
}

namespace {

Model load_configured_model(const RunConfig& config) {
  if (config.model_path.empty()) {
    throw Error(Errc::invalid_argument, "--model is required");
  }
  Model model = load_model(read_text_file(config.model_path));
  if (config.threshold_override) {
    model.fcn = with_threshold(model.fcn, *config.threshold_override);
  }
  return model;
}

Dataset load_configured_dataset(const RunConfig& config, const Domain& domain,
                                std::ostream& err) {
  if (!config.dataset_path) {
    throw Error(Errc::invalid_argument, "--data is required");
  }
  Dataset data = load_dataset(read_text_file(*config.dataset_path), domain);
  if (data.clamped_count > 0) {
    fmt::print(err, "warning: clamped {} out-of-domain value(s) into bounds\n",
               data.clamped_count);
  }
  return data;
}

std::vector<double> parse_input_vector(std::string_view text, std::size_t n) {
  std::vector<double> x;
  while (true) {
    const auto comma = text.find(',');
    std::string_view cell = text.substr(0, comma);
    while (!cell.empty() && cell.front() == ' ') cell.remove_prefix(1);
    while (!cell.empty() && cell.back() == ' ') cell.remove_suffix(1);
    x.push_back(parse_real(cell, "--input"));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (x.size() != n) {
    throw Error(Errc::shape,
                fmt::format("--input has {} values, model expects {}", x.size(), n));
  }
  return x;
}

std::string one_based(std::span<const std::size_t> indices) {
  std::vector<std::size_t> shifted(indices.begin(), indices.end());
  for (auto& i : shifted) ++i;
  return fmt::format("{{{}}}", fmt::join(shifted, ","));
}

std::string join_reals(std::span<const double> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    out += format_real(v[i]);
  }
  return out;
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    fmt::print(err, "error ({}): {}\n", to_string(e.code()), e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kInternalOrIo;
  }
}

std::vector<ExplanationKind> kinds_of(const RunConfig& config) {
  if (config.kind) return {*config.kind};
  return {ExplanationKind::contrastive, ExplanationKind::abductive};
}

void write_or_print(const RunConfig& config, std::string_view text,
                    std::ostream& out) {
  if (config.output_path) {
    write_text_file(*config.output_path, text);
  } else {
    out << text;
  }
}

}  // namespace

int cmd_info(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Model model = load_configured_model(config);
    const Fcn& fcn = model.fcn;
    fmt::print(out, "input_dim: {}\n", fcn.input_dim());
    fmt::print(out, "layers: {}\n", fcn.layers().size());
    for (std::size_t l = 0; l < fcn.layers().size(); ++l) {
      const Layer& layer = fcn.layers()[l];
      fmt::print(out, "  layer {}: {}x{} {}", l + 1, layer.rows(), layer.cols(),
                 to_string(layer.activation().kind));
      if (layer.activation().kind == Activation::Kind::step) {
        fmt::print(out, " (>= {})", format_real(layer.activation().step_threshold));
      }
      fmt::print(out, "\n");
    }
    fmt::print(out, "classification_threshold: {}\n", format_real(fcn.threshold()));
    fmt::print(out, "monotonic: {}\n", check_monotonic(fcn) ? "yes" : "no");
    fmt::print(out, "admissible: {}\n", check_admissible(fcn) ? "yes" : "no");
    fmt::print(out, "domain.lower: {}\n", join_reals(model.domain.lower()));
    fmt::print(out, "domain.upper: {}\n", join_reals(model.domain.upper()));
    return kSuccess;
  });
}

int cmd_explain(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Model model = load_configured_model(config);
    const Fcn& fcn = model.fcn;
    std::vector<double> x;
    std::size_t instance = 0;
    if (config.input) {
      x = parse_input_vector(*config.input, fcn.input_dim());
    } else if (config.row) {
      const Dataset data = load_configured_dataset(config, model.domain, err);
      if (*config.row >= data.records.size()) {
        throw Error(Errc::invalid_argument,
                    fmt::format("--row {} is out of range: dataset has {} rows",
                                *config.row, data.records.size()));
      }
      instance = *config.row;
      x = data.records[instance].features;
    } else {
      throw Error(Errc::invalid_argument, "explain needs --input or --row");
    }

    const ExplanationKind kind = config.kind.value_or(ExplanationKind::contrastive);
    ExplanationRecord rec;
    rec.instance_index = instance;
    rec.kind = kind;
    rec.threshold = fcn.threshold();

    const auto begin = std::chrono::steady_clock::now();
    int status = kSuccess;
    try {
      const Explanation e = explain(fcn, model.domain, x, kind);
      rec.wall_time_s = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - begin)
                            .count();
      rec.size = static_cast<long>(e.indices.size());
      rec.indices = e.indices;
      rec.prediction = e.original_prediction;
      rec.eval_count = e.eval_count;

      const bool at_lower = e.original_prediction;
      fmt::print(out, "kind: {}\n", to_string(kind));
      fmt::print(out, "output: {}\n", format_real(forward(fcn, x)));
      fmt::print(out, "prediction: {}\n", e.original_prediction ? 1 : 0);
      fmt::print(out, "size: {}\n", e.indices.size());
      fmt::print(out, "indices: {}\n", one_based(e.indices));
      fmt::print(out, "substitution: {} bound ({})\n", at_lower ? "lower" : "upper",
                 join_reals(e.substitution_target));
      fmt::print(out, "eval_count: {}\n", e.eval_count);
      if (config.k) {
        if (kind == ExplanationKind::contrastive) {
          fmt::print(out, "mcr(k={}): {}\n", *config.k,
                     mcr_query(fcn, model.domain, x, *config.k));
          fmt::print(out, "d_robust(k={}): {}\n", *config.k,
                     d_robust(fcn, model.domain, x, *config.k));
        } else {
          fmt::print(out, "msr(k={}): {}\n", *config.k,
                     msr_query(fcn, model.domain, x, *config.k));
        }
      }
    } catch (const Error& e) {
      if (e.code() != Errc::no_explanation) throw;
      rec.wall_time_s = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - begin)
                            .count();
      rec.size = -1;
      rec.prediction = classify(fcn, x);
      rec.eval_count = 2 * fcn.input_dim() + 1;
      fmt::print(out, "kind: {}\n", to_string(kind));
      fmt::print(out, "prediction: {}\n", rec.prediction ? 1 : 0);
      fmt::print(out, "no explanation: {}\n", e.what());
      status = kNoExplanation;
    }
    if (config.output_path) {
      write_text_file(*config.output_path,
                      write_results(std::span<const ExplanationRecord>(&rec, 1)));
    }
    return status;
  });
}

int cmd_batch(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Model model = load_configured_model(config);
    const Dataset data = load_configured_dataset(config, model.domain, err);
    const ExplanationKind kind = config.kind.value_or(ExplanationKind::contrastive);
    const auto records = explain_batch(model.fcn, model.domain, data.records,
                                       kind, config.workers);
    write_or_print(config, write_results(records), out);

    const SizeTimeSummary s = summarize(records);
    fmt::print(out, "explained: {}/{} ({})\n", s.count, records.size(),
               to_string(kind));
    if (s.count > 0) {
      fmt::print(out, "size: mean={:.4f} median={} min={} max={}\n", s.mean_size,
                 s.median_size, s.min_size, s.max_size);
      fmt::print(out, "wall_time_s: mean={:.6f} median={:.6f} min={:.6f} max={:.6f}\n",
                 s.mean_time, s.median_time, s.min_time, s.max_time);
    }
    return s.count == records.size() ? kSuccess : kNoExplanation;
  });
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err,
               const Explainer& explainer) {
  return guarded(err, [&] {
    const Model model = load_configured_model(config);
    const Fcn& fcn = model.fcn;
    if (fcn.input_dim() > config.oracle_cap) {
      throw Error(Errc::too_large,
                  fmt::format("model has {} features, above the oracle cap of {} "
                              "(set MONOXPLAIN_ORACLE_CAP to raise it)",
                              fcn.input_dim(), config.oracle_cap));
    }
    std::vector<std::vector<double>> rows;
    if (config.input) {
      rows.push_back(parse_input_vector(*config.input, fcn.input_dim()));
    } else {
      for (auto& r : load_configured_dataset(config, model.domain, err).records) {
        rows.push_back(std::move(r.features));
      }
    }

    const auto size_or_none = [](auto&& produce) -> long {
      try {
        return static_cast<long>(produce().indices.size());
      } catch (const Error& e) {
        if (e.code() == Errc::no_explanation) return -1;
        throw;
      }
    };

    std::size_t checked = 0;
    std::size_t mismatches = 0;
    for (const ExplanationKind kind : kinds_of(config)) {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const long greedy = size_or_none(
            [&] { return explainer(fcn, model.domain, rows[i], kind); });
        const long oracle = size_or_none([&] {
          return brute_force(fcn, model.domain, rows[i], kind, config.oracle_cap);
        });
        ++checked;
        if (greedy == oracle) continue;
        ++mismatches;
        fmt::print(out, "counterexample: kind={} row={} greedy_size={} oracle_size={}\n",
                   to_string(kind), i, greedy, oracle);
        fmt::print(out, "input: {}\n", join_reals(rows[i]));
        fmt::print(out, "model:\n{}", save_model(fcn, model.domain));
      }
    }
    fmt::print(out, "verified {} explanation(s): {} mismatch(es)\n", checked,
               mismatches);
    return mismatches == 0 ? kSuccess : kInternalOrIo;
  });
}

int cmd_gen_setcover(const RunConfig& config, std::ostream& out,
                     std::ostream& err) {
  return guarded(err, [&] {
    const bool from_file = config.dataset_path.has_value();
    const SetCoverInstance inst =
        from_file ? parse_set_cover(read_text_file(*config.dataset_path))
                  : random_set_cover(config.universe_size, config.subset_count,
                                     config.budget, config.seed);
    const SetCoverEncoding enc = encode_set_cover(inst);
    const std::string model_text = save_model(enc.fcn, enc.domain);

    if (config.output_path) {
      const auto base = config.output_path->string();
      write_text_file(*config.output_path, model_text);
      const std::vector<InstanceRecord> queries{{enc.mcr_input, std::nullopt},
                                                {enc.msr_input, std::nullopt}};
      write_text_file(base + ".queries.csv",
                      write_dataset(queries, enc.fcn.input_dim()));
      if (!from_file) write_text_file(base + ".setcover.txt", format_set_cover(inst));
    } else {
      out << model_text;
    }
    fmt::print(out, "universe: {} subsets: {} budget: {}\n", inst.universe_size,
               inst.subsets.size(), inst.budget);
    fmt::print(out, "k: {}\n", enc.k);
    fmt::print(out, "mcr_input: {}\n", join_reals(enc.mcr_input));
    fmt::print(out, "msr_input: {}\n", join_reals(enc.msr_input));
    if (inst.subsets.size() <= config.oracle_cap) {
      fmt::print(out, "set_cover_optimum: {}\n",
                 solve_set_cover(inst, config.oracle_cap));
    } else {
      fmt::print(out, "set_cover_optimum: skipped (m > oracle cap {})\n",
                 config.oracle_cap);
    }
    return kSuccess;
  });
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!config.sweep) throw Error(Errc::invalid_argument, "sweep needs --sweep");
    const Model model = load_configured_model(config);
    const Dataset data = load_configured_dataset(config, model.domain, err);

    std::vector<double> outputs;
    outputs.reserve(data.records.size());
    for (const auto& r : data.records) outputs.push_back(forward(model.fcn, r.features));

    std::string csv = "threshold,kind,mean_size,mean_time_s,count\n";
    for (const double t : config.sweep->thresholds()) {
      const Fcn fcn = with_threshold(model.fcn, t);
      std::vector<InstanceRecord> selected;
      for (std::size_t i = 0; i < data.records.size(); ++i) {
        if (!config.below_threshold_only || outputs[i] <= t) {
          selected.push_back(data.records[i]);
        }
      }
      for (const ExplanationKind kind : kinds_of(config)) {
        const auto records =
            explain_batch(fcn, model.domain, selected, kind, config.workers);
        const SizeTimeSummary s = summarize(records);
        if (s.count == 0) {
          csv += fmt::format("{},{},nan,nan,0\n", format_real(t), to_string(kind));
        } else {
          csv += fmt::format("{},{},{},{:.6f},{}\n", format_real(t),
                             to_string(kind), format_real(s.mean_size),
                             s.mean_time, s.count);
        }
      }
    }
    write_or_print(config, csv, out);
    return kSuccess;
  });
}

namespace {

std::optional<ExplanationKind> parse_kind(const std::string& text,
                                          bool allow_both) {
  if (text == "contrastive") return ExplanationKind::contrastive;
  if (text == "abductive") return ExplanationKind::abductive;
  if (allow_both && text == "both") return std::nullopt;
  throw Error(Errc::invalid_argument, fmt::format("unknown --kind '{}'", text));
}

std::size_t oracle_cap_from_env() {
  const char* raw = std::getenv("MONOXPLAIN_ORACLE_CAP");
  if (raw == nullptr || *raw == '\0') return kDefaultOracleCap;
  const std::string_view text(raw);
  std::size_t cap = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), cap);
  if (ec != std::errc{} || ptr != text.data() + text.size() || cap == 0) {
    throw Error(Errc::invalid_argument,
                fmt::format("MONOXPLAIN_ORACLE_CAP='{}' is not a positive integer",
                            text));
  }
  return cap;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Cardinality-minimal explanations for monotonic networks",
               "monoxplain"};
  app.require_subcommand(1);

  RunConfig config;
  std::string model;
  std::string data;
  std::string output;
  std::string kind_text;
  std::string sweep_text;
  std::string input;
  std::size_t row = 0;
  std::size_t k = 0;
  double threshold = 0.0;

  const auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", model, "Model file (JSON)")->required();
  };
  const auto add_threshold = [&](CLI::App* sub) {
    sub->add_option("--threshold", threshold, "Override the classification threshold");
  };
  const auto add_out = [&](CLI::App* sub, const char* what) {
    sub->add_option("--out", output, what);
  };
  const auto add_workers = [&](CLI::App* sub) {
    sub->add_option("--workers", config.workers, "Parallel workers over instances")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* info = app.add_subcommand("info", "Summarize a model file");
  add_model(info);
  add_threshold(info);

  CLI::App* explain_cmd = app.add_subcommand("explain", "Explain one instance");
  add_model(explain_cmd);
  explain_cmd->add_option("--input", input, "Comma-separated feature values");
  explain_cmd->add_option("--data", data, "Dataset CSV (with --row)");
  explain_cmd->add_option("--row", row, "0-based data row to explain");
  explain_cmd->add_option("--kind", kind_text, "contrastive|abductive");
  explain_cmd->add_option("--k", k, "Also answer the size-k decision query")
      ->check(CLI::PositiveNumber);
  add_threshold(explain_cmd);
  add_out(explain_cmd, "Results CSV for this instance");

  CLI::App* batch = app.add_subcommand("batch", "Explain every dataset row");
  add_model(batch);
  batch->add_option("--data", data, "Dataset CSV")->required();
  batch->add_option("--kind", kind_text, "contrastive|abductive");
  add_threshold(batch);
  add_workers(batch);
  batch->add_option("--seed", config.seed, "Seed (recorded for reproducibility)");
  add_out(batch, "Results CSV (stdout when omitted)");

  CLI::App* verify = app.add_subcommand("verify", "Compare greedy against exhaustive search");
  add_model(verify);
  verify->add_option("--data", data, "Dataset CSV");
  verify->add_option("--input", input, "Single comma-separated instance");
  verify->add_option("--kind", kind_text, "contrastive|abductive|both");
  add_threshold(verify);

  CLI::App* gen = app.add_subcommand("gen-setcover",
                                     "Encode a SET-COVER instance as a step network");
  gen->add_option("--data", data, "Instance file: 'n m K' then m subset lines");
  gen->add_option("--seed", config.seed, "Seed for a generated instance");
  gen->add_option("--universe", config.universe_size, "Generated universe size n")
      ->check(CLI::PositiveNumber);
  gen->add_option("--subsets", config.subset_count, "Generated subset count m")
      ->check(CLI::PositiveNumber);
  gen->add_option("--budget", config.budget, "Generated budget K")
      ->check(CLI::PositiveNumber);
  add_out(gen, "Model output path (stdout when omitted)");

  CLI::App* sweep = app.add_subcommand("sweep", "Mean explanation size across thresholds");
  add_model(sweep);
  sweep->add_option("--data", data, "Dataset CSV")->required();
  sweep->add_option("--sweep", sweep_text, "start:stop:count")->required();
  sweep->add_option("--kind", kind_text, "contrastive|abductive|both");
  sweep->add_flag("--below-threshold", config.below_threshold_only,
                  "Only average instances whose output is <= the threshold");
  add_workers(sweep);
  sweep->add_option("--seed", config.seed, "Seed (recorded for reproducibility)");
  add_out(sweep, "Sweep CSV (stdout when omitted)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kPreconditionOrConfig;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const auto given = [chosen](const char* name) {
    const CLI::Option* opt = chosen->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  try {
    config.command = chosen->get_name();
    config.model_path = model;
    if (!data.empty()) config.dataset_path = data;
    if (!output.empty()) config.output_path = output;
    if (given("--input")) config.input = input;
    if (given("--row")) config.row = row;
    if (given("--k")) config.k = k;
    if (given("--threshold")) config.threshold_override = threshold;
    if (!kind_text.empty()) {
      config.kind = parse_kind(kind_text, chosen == verify || chosen == sweep);
    }
    if (!sweep_text.empty()) config.sweep = parse_sweep(sweep_text);
    config.oracle_cap = oracle_cap_from_env();
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kPreconditionOrConfig;
  }

  if (chosen == info) return cmd_info(config, out, err);
  if (chosen == explain_cmd) return cmd_explain(config, out, err);
  if (chosen == batch) return cmd_batch(config, out, err);
  if (chosen == verify) return cmd_verify(config, out, err);
  if (chosen == gen) return cmd_gen_setcover(config, out, err);
  return cmd_sweep(config, out, err);
}

}  // namespace monoxplain::cli
