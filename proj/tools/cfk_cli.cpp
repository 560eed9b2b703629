// Copyright 2026 The cfk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end for the k-anonymous counterfactual pipeline.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cfk/cfk.hpp"

namespace {

namespace fs = std::filesystem;

struct Flags {
  std::string config;
  std::optional<std::size_t> k;
  std::optional<std::size_t> alpha;
  std::optional<std::size_t> iters;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> search_samples;
  std::optional<std::size_t> max_explanations;
  std::optional<std::string> out;
  std::optional<std::string> model;
  std::optional<std::string> objective;
  std::optional<std::string> mondrian_source;
  std::vector<std::size_t> k_sweep;
  std::optional<unsigned> threads;
  bool no_timing = false;
  bool baseline = false;
  // attack
  std::optional<std::int64_t> row;
  std::optional<std::string> explanation;
  // anonymize
  std::optional<std::string> counterfactuals;
  // synth
  std::string kind = "cmc";
  std::size_t rows = 0;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "schema/experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--k", f.k, "anonymity level");
  cmd->add_option("--alpha", f.alpha, "candidate-list size");
  cmd->add_option("--iters", f.iters, "multi-start rounds");
  cmd->add_option("--seed", f.seed, "search seed");
  cmd->add_option("--samples", f.samples, "pureness samples in the final report");
  cmd->add_option("--search-samples", f.search_samples, "pureness samples per search step");
  cmd->add_option("--max-explanations", f.max_explanations, "cap on explained test rows");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--model", f.model, "load this model instead of training")
      ->check(CLI::ExistingFile);
  cmd->add_option("--objective", f.objective, "search objective: lexicographic or ncp");
  cmd->add_option("--threads", f.threads, "worker threads");
  cmd->add_flag("--no-timing", f.no_timing, "write elapsed times as 0 (byte-reproducible)");
}

cfk::ExperimentConfig make_config(const Flags& f) {
  cfk::ExperimentConfig c = cfk::load_experiment_config(f.config);
  if (f.k) c.cfk.k = *f.k;
  if (f.alpha) c.cfk.alpha = *f.alpha;
  if (f.iters) c.cfk.max_iter = *f.iters;
  if (f.seed) c.cfk.seed = *f.seed;
  if (f.samples) c.cfk.pureness_samples = *f.samples;
  if (f.search_samples) c.cfk.search_samples = *f.search_samples;
  if (f.max_explanations) c.max_explanations = *f.max_explanations;
  if (f.out) c.output_dir = *f.out;
  if (f.model) c.model_path = *f.model;
  if (f.objective) c.cfk.objective = cfk::parse_objective(*f.objective);
  if (f.mondrian_source) c.mondrian_source = cfk::parse_mondrian_source(*f.mondrian_source);
  if (!f.k_sweep.empty()) c.k_sweep = f.k_sweep;
  if (f.threads) c.threads = *f.threads;
  if (f.baseline) c.baseline = true;
  c.record_timing = !f.no_timing;
  c.validate();
  return c;
}

std::string percent(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << 100.0 * v << "%";
  return s.str();
}

void print_aggregates(const std::vector<cfk::Aggregate>& all, std::ostream& out) {
  out << std::left << std::setw(10) << "method" << std::setw(6) << "k" << std::setw(10) << "group"
      << std::setw(7) << "n" << std::setw(10) << "NCP" << std::setw(10) << "pureness"
      << "seconds\n";
  for (const cfk::Aggregate& a : all) {
    out << std::left << std::setw(10) << a.method << std::setw(6) << a.k << std::setw(10)
        << a.group << std::setw(7) << a.count << std::setw(10) << percent(a.mean_ncp)
        << std::setw(10) << percent(a.mean_pureness) << std::setprecision(4)
        << a.mean_elapsed_seconds << "\n";
  }
}

void report_written(const std::vector<fs::path>& files) {
  for (const fs::path& p : files) std::cout << "wrote " << p.string() << "\n";
}

int run_prepare(const Flags& f) {
  const cfk::ExperimentConfig c = make_config(f);
  cfk::Experiment e(c);
  const cfk::Schema& schema = e.data().schema();
  std::cout << "rows read " << e.load_stats().rows_read << ", skipped (missing values) "
            << e.load_stats().rows_skipped_missing << ", kept " << e.data().size() << "\n";
  std::cout << "train " << e.train().size() << " / test " << e.test().size() << "\n";
  for (std::size_t a = 0; a < schema.size(); ++a) {
    const cfk::Attribute& attr = schema.attribute(a);
    const cfk::AttributeSummary& s = e.data().summary(a);
    std::cout << "  " << std::left << std::setw(22) << attr.name << std::setw(12)
              << cfk::to_string(attr.kind) << std::setw(10) << cfk::to_string(attr.role);
    if (attr.numeric()) {
      std::cout << "range " << schema.render(a, s.min) << " .. " << schema.render(a, s.max);
    } else {
      std::cout << s.distinct_count() << " values";
    }
    std::cout << "\n";
  }
  const std::size_t t = schema.target();
  std::vector<std::size_t> counts(schema.attribute(t).labels.size(), 0);
  for (const cfk::Record& r : e.data().records()) ++counts[static_cast<std::size_t>(r.values[t])];
  std::cout << "target classes:";
  for (std::size_t c2 = 0; c2 < counts.size(); ++c2) {
    std::cout << " " << schema.attribute(t).labels[c2] << "=" << counts[c2];
  }
  std::cout << "\n";
  if (f.out) {
    fs::create_directories(*f.out);
    std::ofstream train(fs::path(*f.out) / "train.csv", std::ios::binary);
    cfk::write_csv(e.train(), train);
    std::ofstream test(fs::path(*f.out) / "test.csv", std::ios::binary);
    cfk::write_csv(e.test(), test);
    report_written({fs::path(*f.out) / "train.csv", fs::path(*f.out) / "test.csv"});
  }
  return 0;
}

int run_train(const Flags& f) {
  cfk::ExperimentConfig c = make_config(f);
  c.model_path.reset();
  cfk::Experiment e(c);
  const cfk::RandomForest& model = e.model();
  for (const cfk::CvCell& cell : e.cv_cells()) {
    std::cout << "trees " << cell.n_estimators << ", max leaves "
              << (cell.max_leaf_nodes ? std::to_string(*cell.max_leaf_nodes) : "none")
              << ": CV accuracy " << percent(cell.mean_accuracy) << "\n";
  }
  const std::vector<int> pred = cfk::predict_all(model, e.test());
  const std::size_t t = e.test().schema().target();
  std::size_t hit = 0;
  for (std::size_t i = 0; i < e.test().size(); ++i) {
    hit += pred[i] == static_cast<int>(e.test()[i].values[t]) ? 1 : 0;
  }
  std::cout << "selected " << model.n_estimators() << " trees, max leaves "
            << (model.max_leaf_nodes() ? std::to_string(*model.max_leaf_nodes()) : "none")
            << "; test accuracy "
            << percent(static_cast<double>(hit) / static_cast<double>(e.test().size())) << "\n";
  std::cout << "feature importance:";
  const cfk::Schema& schema = e.train().schema();
  for (std::size_t a : cfk::feature_importance_rank(model, schema)) {
    std::cout << " " << schema.attribute(a).name;
  }
  std::cout << "\n";
  fs::create_directories(c.output_dir);
  const fs::path path = c.output_dir / "model.json";
  std::ofstream out(path, std::ios::binary);
  out << model.to_json().dump() << "\n";
  report_written({path});
  return 0;
}

int run_explain(const Flags& f) {
  const cfk::ExperimentConfig c = make_config(f);
  cfk::Experiment e(c);
  const std::vector<cfk::CounterfactualResult> cfs = e.native_counterfactuals();
  const cfk::Schema& schema = e.train().schema();
  for (std::size_t i = 0; i < cfs.size(); ++i) {
    std::cout << "explanation " << i << ": test row " << cfs[i].factual.row_id << " -> train row "
              << cfs[i].counterfactual.row_id << " (distance " << cfs[i].distance << "):";
    for (std::size_t a : schema.predictors()) {
      if (cfs[i].factual.values[a] == cfs[i].counterfactual.values[a]) continue;
      std::cout << " " << schema.attribute(a).name << " "
                << schema.render(a, cfs[i].factual.values[a]) << "->"
                << schema.render(a, cfs[i].counterfactual.values[a]);
    }
    std::cout << "\n";
  }
  fs::create_directories(c.output_dir);
  const fs::path path = c.output_dir / "counterfactuals.csv";
  std::ofstream out(path, std::ios::binary);
  cfk::write_counterfactuals(cfs, e.train(), out);
  report_written({path});
  return 0;
}

int run_experiment(const Flags& f, const std::string& mode) {
  cfk::ExperimentConfig c = make_config(f);
  if (mode == "baseline") c.baseline = true;
  if (mode == "anonymize") c.baseline = false;
  cfk::Experiment e(c);
  std::vector<std::size_t> ks = c.k_sweep;
  if (mode == "anonymize" || mode == "baseline") ks = {c.cfk.k};
  std::vector<cfk::CounterfactualResult> cfs;
  const std::optional<std::string> saved =
      f.counterfactuals ? f.counterfactuals
      : fs::exists(c.output_dir / "counterfactuals.csv") && mode == "anonymize"
          ? std::optional<std::string>((c.output_dir / "counterfactuals.csv").string())
          : std::nullopt;
  if (saved) {
    std::ifstream in(*saved);
    if (!in) throw cfk::Error("cannot open " + *saved);
    cfs = cfk::read_counterfactuals(in, e.test(), e.train(), e.model());
    std::cout << "loaded " << cfs.size() << " counterfactuals from " << *saved << "\n";
  } else {
    cfs = e.native_counterfactuals();
  }
  const cfk::PipelineResult result = e.run(cfs, ks);
  const bool fairness = mode == "fairness";
  const std::vector<fs::path> files = cfk::write_reports(result, c.output_dir, fairness);
  print_aggregates(cfk::aggregate(result.rows), std::cout);
  if (fairness && !result.rows.empty()) {
    std::cout << "\nfairness (minority - majority):\n";
    for (const cfk::FairnessRow& r : cfk::fairness_report(result.rows)) {
      std::cout << "  " << r.method << " k=" << r.k << ": ";
      if (r.ncp_gap) {
        std::cout << "NCP gap " << percent(*r.ncp_gap) << ", pureness gap "
                  << percent(*r.pureness_gap) << "\n";
      } else {
        std::cout << "gap absent (only " << (r.minority ? "minority" : "majority")
                  << " explanations)\n";
      }
    }
  }
  report_written(files);
  return 0;
}

int run_attack(const Flags& f) {
  const cfk::ExperimentConfig c = make_config(f);
  cfk::Experiment e(c);
  const cfk::Dataset& population = e.train();
  const cfk::Schema& schema = population.schema();
  if (f.explanation) {
    const auto values = cfk::parse_explanation_values(schema, *f.explanation);
    std::optional<cfk::GeneralizedInstance> g;
    const cfk::AttackResult r = cfk::linkage_attack(schema, values, population, &g);
    if (!g) {
      std::cout << "explanation " << *f.explanation << " matches 0 row(s)\n";
      return 0;
    }
    cfk::print_attack(r, *g, std::cout);
    return 0;
  }
  if (!f.row) throw cfk::Error("attack needs --row or --explanation");
  const auto pos = population.position_of(*f.row);
  if (!pos) throw cfk::Error("row " + std::to_string(*f.row) + " is not in the training split");
  const cfk::GeneralizedInstance native(population.schema_ptr(), population[*pos]);
  std::cout << "native explanation:\n";
  cfk::print_attack(cfk::linkage_attack(native, population), native, std::cout);
  if (f.k) {
    cfk::CounterfactualResult base{population[*pos], population[*pos], e.desired(), 0.0};
    cfk::Anonymizer anonymizer(population, e.model(), c.cfk);
    const cfk::CfkSolution s = anonymizer.anonymize(base);
    std::cout << "\n" << c.cfk.k << "-anonymous explanation:\n";
    cfk::print_attack(cfk::linkage_attack(s.instance, population), s.instance, std::cout);
  }
  return 0;
}

int run_synth(const Flags& f) {
  const std::size_t rows = f.rows ? f.rows
                           : f.kind == "heart" ? 303
                                               : 1500;
  const cfk::synthetic::Table t = cfk::synthetic::by_name(f.kind, rows, f.seed.value_or(1));
  const fs::path config = cfk::synthetic::write(t, f.out.value_or("."));
  std::cout << "wrote " << t.rows.size() << " rows; config " << config.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-anonymous counterfactual explanations"};
  app.require_subcommand(1);
  Flags f;

  auto* prepare = app.add_subcommand("prepare", "validate schema and CSV, show the split");
  add_common(prepare, f);
  auto* train = app.add_subcommand("train", "tune and fit the random forest, save model.json");
  add_common(train, f);
  auto* explain = app.add_subcommand("explain", "native counterfactuals for rejected test rows");
  add_common(explain, f);
  auto* anonymize = app.add_subcommand("anonymize", "CF-K on the native counterfactuals");
  add_common(anonymize, f);
  anonymize->add_option("--counterfactuals", f.counterfactuals,
                        "counterfactuals.csv from explain (default: <out>/counterfactuals.csv)");
  auto* baseline = app.add_subcommand("baseline", "CF-K against the Mondrian baseline at --k");
  add_common(baseline, f);
  auto* sweep = app.add_subcommand("sweep", "CF-K over the k sweep");
  add_common(sweep, f);
  auto* fairness = app.add_subcommand("fairness", "k sweep with per-group gaps");
  add_common(fairness, f);
  for (auto* cmd : {baseline, sweep, fairness}) {
    cmd->add_option("--mondrian-source", f.mondrian_source, "split Mondrian runs on: train or test");
    cmd->add_option("--counterfactuals", f.counterfactuals, "reuse counterfactuals.csv");
  }
  for (auto* cmd : {sweep, fairness}) {
    cmd->add_option("--k-sweep", f.k_sweep, "k values, ascending")->delimiter(',');
    cmd->add_flag("--baseline", f.baseline, "include the Mondrian baseline");
  }
  auto* attack = app.add_subcommand("attack", "explanation linkage attack on the training split");
  add_common(attack, f);
  attack->add_option("--row", f.row, "training row id used as the counterfactual");
  attack->add_option("--explanation", f.explanation, "rendered explanation, e.g. \"(24-27, F, Antwerp)\"");
  auto* synth = app.add_subcommand("synth", "write a synthetic dataset and its config");
  synth->add_option("--kind", f.kind, "cmc, heart or fairness")
      ->check(CLI::IsMember({"cmc", "heart", "fairness"}));
  synth->add_option("--rows", f.rows, "row count");
  synth->add_option("--seed", f.seed, "generator seed");
  synth->add_option("--out", f.out, "output directory");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*prepare) return run_prepare(f);
    if (*train) return run_train(f);
    if (*explain) return run_explain(f);
    if (*anonymize) return run_experiment(f, "anonymize");
    if (*baseline) return run_experiment(f, "baseline");
    if (*sweep) return run_experiment(f, "sweep");
    if (*fairness) return run_experiment(f, "fairness");
    if (*attack) return run_attack(f);
    if (*synth) return run_synth(f);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
