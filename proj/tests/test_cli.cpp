#include <cstdlib>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "monoxplain/cli.hpp"
#include "monoxplain/error.hpp"
#include "monoxplain/model_io.hpp"
#include "support/generators.hpp"
#include "support/tempdir.hpp"

using namespace monoxplain;
using monoxplain::testing::ActivationMix;
using monoxplain::testing::TempDir;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_model(const TempDir& dir, const std::string& name, const Fcn& fcn,
                        const Domain& domain) {
  const auto path = dir / name;
  write_text_file(path, save_model(fcn, domain));
  return path.string();
}

std::string write_rows(const TempDir& dir, const std::string& name,
                       const std::vector<std::vector<double>>& rows, std::size_t n) {
  std::vector<InstanceRecord> records;
  for (const auto& r : rows) records.push_back({r, std::nullopt});
  const auto path = dir / name;
  write_text_file(path, write_dataset(records, n));
  return path.string();
}

std::vector<std::vector<double>> random_rows(std::mt19937_64& rng, std::size_t count,
                                             std::size_t n) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < count; ++i) {
    rows.push_back(testing::random_point(rng, Domain::unit(n)));
  }
  return rows;
}

// Drops the wall_time_s column (7th) from a results CSV.
std::string without_timing(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::string out;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i == 6) continue;
      out += cells[i];
      out += i + 1 == cells.size() ? "\n" : ",";
    }
  }
  return out;
}

Fcn constant_net() {
  std::vector<Layer> layers;
  layers.emplace_back(1, 3, std::vector<double>{0.1, 0.1, 0.1},
                      std::vector<double>{10.0}, Activation::relu());
  return Fcn(3, std::move(layers), 1.0);
}

Fcn single_layer_sigmoid(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> w(0.05, 1.0);
  std::vector<double> weights(n);
  for (double& v : weights) v = w(rng);
  std::vector<Layer> layers;
  layers.emplace_back(1, n, std::move(weights), std::vector<double>{-2.0},
                      Activation::sigmoid());
  return Fcn(n, std::move(layers), 0.5);
}

}  // namespace

TEST_CASE("exit code mapping covers every error class") {
  CHECK(cli::exit_code_for(Errc::no_explanation) == 3);
  CHECK(cli::exit_code_for(Errc::precondition) == 2);
  CHECK(cli::exit_code_for(Errc::too_large) == 2);
  CHECK(cli::exit_code_for(Errc::invalid_instance) == 2);
  CHECK(cli::exit_code_for(Errc::io) == 1);
  CHECK(cli::exit_code_for(Errc::parse) == 1);
  CHECK(cli::exit_code_for(Errc::internal) == 1);
}

TEST_CASE("sweep specs") {
  const auto spec = cli::parse_sweep("0:1:5");
  CHECK(spec.thresholds() == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  CHECK_THROWS_AS(cli::parse_sweep("0:1:1"), Error);
  CHECK_THROWS_AS(cli::parse_sweep("0:1"), Error);
  CHECK_THROWS_AS(cli::parse_sweep("a:1:3"), Error);
}

TEST_CASE("explain command") {
  TempDir dir;
  const auto linear =
      write_model(dir, "linear.json", testing::linear_net({2, 1, 1}, 2.5), Domain::unit(3));

  auto r = run_cli({"explain", "--model", linear, "--input", "1,1,1", "--kind",
                    "contrastive", "--k", "1", "--out", (dir / "one.csv").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("size: 1\n") != std::string::npos);
  CHECK(r.out.find("indices: {1}\n") != std::string::npos);
  CHECK(r.out.find("mcr(k=1): true") != std::string::npos);
  const std::string csv = read_text_file(dir / "one.csv");
  CHECK(csv.starts_with(std::string(kResultsHeader) + "\n0,contrastive,1,1,1,2.5,"));

  r = run_cli({"explain", "--model", linear, "--input", "1,1,1", "--kind", "abductive"});
  CHECK(r.code == 0);
  CHECK(r.out.find("size: 2\n") != std::string::npos);

  const auto constant = write_model(dir, "constant.json", constant_net(), Domain::unit(3));
  r = run_cli({"explain", "--model", constant, "--input", "0.5,0.5,0.5"});
  CHECK(r.code == 3);

  std::vector<Layer> layers;
  layers.emplace_back(1, 3, std::vector<double>{1, 1, 1}, std::vector<double>{0},
                      Activation::step(1.5));
  const auto step =
      write_model(dir, "step.json", Fcn(3, std::move(layers), 0.5), Domain::unit(3));
  r = run_cli({"explain", "--model", step, "--input", "1,1,1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("admissible") != std::string::npos);

  const auto data = write_rows(dir, "rows.csv", {{0, 0, 0}, {1, 1, 1}}, 3);
  r = run_cli({"explain", "--model", linear, "--data", data, "--row", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("size: 1\n") != std::string::npos);
  CHECK(run_cli({"explain", "--model", linear, "--data", data, "--row", "2"}).code == 2);

  CHECK(run_cli({"explain", "--model", linear, "--input", "1,1"}).code == 2);
  CHECK(run_cli({"explain", "--model", linear, "--input", "1,x,1"}).code == 2);
  CHECK(run_cli({"explain", "--model", (dir / "missing.json").string(), "--input",
                 "1,1,1"})
            .code == 1);
  CHECK(run_cli({"explain", "--model", linear, "--input", "1,1,1", "--kind", "both"})
            .code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
}

TEST_CASE("threshold override") {
  TempDir dir;
  const auto linear =
      write_model(dir, "linear.json", testing::linear_net({2, 1, 1}, 2.5), Domain::unit(3));
  const auto r = run_cli({"explain", "--model", linear, "--input", "1,1,1", "--threshold",
                          "0.5", "--kind", "contrastive"});
  CHECK(r.code == 0);
  CHECK(r.out.find("size: 3\n") != std::string::npos);
}

TEST_CASE("info command") {
  TempDir dir;
  const auto linear =
      write_model(dir, "linear.json", testing::linear_net({2, 1, 1}, 2.5), Domain::unit(3));
  const auto r = run_cli({"info", "--model", linear});
  CHECK(r.code == 0);
  CHECK(r.out.find("input_dim: 3") != std::string::npos);
  CHECK(r.out.find("monotonic: yes") != std::string::npos);
  CHECK(r.out.find("admissible: yes") != std::string::npos);
}

TEST_CASE("batch results do not depend on the worker count") {
  TempDir dir;
  std::mt19937_64 rng(61);
  const Fcn fcn = testing::random_monotonic_net(rng, 6, 2, ActivationMix::mixed);
  const auto model = write_model(dir, "m.json", fcn, Domain::unit(6));
  const auto data = write_rows(dir, "d.csv", random_rows(rng, 10, 6), 6);

  for (const char* kind : {"contrastive", "abductive"}) {
    const auto one = (dir / "one.csv").string();
    const auto four = (dir / "four.csv").string();
    const auto r1 = run_cli({"batch", "--model", model, "--data", data, "--kind", kind,
                             "--workers", "1", "--out", one});
    const auto r4 = run_cli({"batch", "--model", model, "--data", data, "--kind", kind,
                             "--workers", "4", "--out", four});
    CHECK(r1.code == r4.code);
    CHECK(r1.code != 1);
    CHECK(r1.code != 2);
    CHECK(without_timing(read_text_file(one)) == without_timing(read_text_file(four)));
    CHECK(r1.out.find("explained:") != std::string::npos);
  }
}

TEST_CASE("batch edge cases") {
  TempDir dir;
  const auto linear =
      write_model(dir, "linear.json", testing::linear_net({2, 1, 1}, 2.5), Domain::unit(3));
  const auto empty = write_rows(dir, "empty.csv", {}, 3);
  const auto out = (dir / "out.csv").string();
  auto r = run_cli({"batch", "--model", linear, "--data", empty, "--out", out});
  CHECK(r.code == 0);
  CHECK(read_text_file(out) == std::string(kResultsHeader) + "\n");

  const auto constant = write_model(dir, "constant.json", constant_net(), Domain::unit(3));
  const auto rows = write_rows(dir, "rows.csv", {{0, 0, 0}, {1, 1, 1}}, 3);
  r = run_cli({"batch", "--model", constant, "--data", rows, "--out", out});
  CHECK(r.code == 3);
  CHECK(read_text_file(out).find("0,contrastive,-1,,1,") != std::string::npos);

  CHECK(run_cli({"batch", "--model", linear, "--data", rows, "--workers", "0"}).code == 2);
}

TEST_CASE("verify command") {
  TempDir dir;
  std::mt19937_64 rng(62);
  const Fcn fcn = single_layer_sigmoid(rng, 8);
  const auto model = write_model(dir, "m.json", fcn, Domain::unit(8));
  const auto data = write_rows(dir, "d.csv", random_rows(rng, 50, 8), 8);

  auto r = run_cli({"verify", "--model", model, "--data", data});
  CHECK(r.code == 0);
  CHECK(r.out.find("verified 100 explanation(s): 0 mismatch(es)") != std::string::npos);

  const Fcn wide = testing::linear_net(std::vector<double>(30, 1.0), 15.0);
  const auto wide_model = write_model(dir, "wide.json", wide, Domain::unit(30));
  r = run_cli({"verify", "--model", wide_model, "--input",
               "0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5,"
               "0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5"});
  CHECK(r.code == 2);
  CHECK(r.err.find("oracle cap") != std::string::npos);

  // A greedy that drops the last chosen feature is caught.
  cli::RunConfig config;
  config.model_path = model;
  config.dataset_path = data;
  config.kind = ExplanationKind::contrastive;
  std::ostringstream out;
  std::ostringstream err;
  const auto corrupted = [](const Fcn& f, const Domain& d, std::span<const double> x,
                            ExplanationKind k) {
    Explanation e = cli::default_explainer(f, d, x, k);
    if (e.indices.size() > 1) e.indices.pop_back();
    return e;
  };
  const int code = cli::cmd_verify(config, out, err, corrupted);
  CHECK(code == 1);
  CHECK(out.str().find("counterexample: kind=contrastive") != std::string::npos);
  CHECK(out.str().find("\"schema_version\": 1") != std::string::npos);
}

TEST_CASE("verify honours the oracle cap environment variable") {
  TempDir dir;
  const auto model =
      write_model(dir, "m.json", testing::linear_net({1, 1, 1, 1}, 1.5), Domain::unit(4));
  ::setenv("MONOXPLAIN_ORACLE_CAP", "3", 1);
  const auto capped = run_cli({"verify", "--model", model, "--input", "1,1,1,1"});
  ::setenv("MONOXPLAIN_ORACLE_CAP", "oops", 1);
  const auto invalid = run_cli({"verify", "--model", model, "--input", "1,1,1,1"});
  ::unsetenv("MONOXPLAIN_ORACLE_CAP");
  const auto normal = run_cli({"verify", "--model", model, "--input", "1,1,1,1"});
  CHECK(capped.code == 2);
  CHECK(invalid.code == 2);
  CHECK(normal.code == 0);
}

TEST_CASE("gen-setcover command") {
  TempDir dir;
  const auto inst = dir / "inst.txt";
  write_text_file(inst, "3 2 2\n1 2\n2 3\n");
  const auto out = dir / "sc.json";
  auto r = run_cli({"gen-setcover", "--data", inst.string(), "--out", out.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("set_cover_optimum: 2") != std::string::npos);
  CHECK(r.out.find("k: 2") != std::string::npos);
  const Model m = load_model(read_text_file(out));
  CHECK(m.fcn.layers()[0].rows() == 3);
  CHECK(m.fcn.layers()[0].cols() == 2);

  // The companion query file feeds straight into verify's oracle.
  const auto queries = out.string() + ".queries.csv";
  r = run_cli({"explain", "--model", out.string(), "--data", queries, "--row", "0"});
  CHECK(r.code == 2);  // step network: the greedy refuses

  write_text_file(inst, "3 1 1\n1 2\n");
  CHECK(run_cli({"gen-setcover", "--data", inst.string()}).code == 2);

  const auto a = run_cli({"gen-setcover", "--seed", "5", "--universe", "6", "--subsets",
                          "7", "--budget", "2"});
  const auto b = run_cli({"gen-setcover", "--seed", "5", "--universe", "6", "--subsets",
                          "7", "--budget", "2"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto c = run_cli({"gen-setcover", "--seed", "6", "--universe", "6", "--subsets",
                          "7", "--budget", "2"});
  CHECK(a.out != c.out);
}

TEST_CASE("sweep command") {
  TempDir dir;
  std::mt19937_64 rng(63);
  const Fcn fcn = testing::random_monotonic_net(rng, 5, 2, ActivationMix::smooth_only);
  const auto model = write_model(dir, "m.json", fcn, Domain::unit(5));
  const auto data = write_rows(dir, "d.csv", random_rows(rng, 12, 5), 5);

  auto r = run_cli({"sweep", "--model", model, "--data", data, "--sweep", "0:1:2"});
  CHECK(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "threshold,kind,mean_size,mean_time_s,count");
  int contrastive = 0;
  int abductive = 0;
  while (std::getline(lines, line)) {
    contrastive += line.find(",contrastive,") != std::string::npos;
    abductive += line.find(",abductive,") != std::string::npos;
  }
  CHECK(contrastive == 2);
  CHECK(abductive == 2);

  // Far below every output: everything is class 1 and nothing needs fixing.
  r = run_cli({"sweep", "--model", model, "--data", data, "--sweep", "-100:-99:2",
               "--kind", "abductive"});
  CHECK(r.code == 0);
  CHECK(r.out.find("-100,abductive,0,") != std::string::npos);
  CHECK(r.out.find("-99,abductive,0,") != std::string::npos);

  CHECK(run_cli({"sweep", "--model", model, "--data", data, "--sweep", "0:1:1"}).code == 2);
}
