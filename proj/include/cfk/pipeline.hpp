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

#ifndef CFK_PIPELINE_HPP_
#define CFK_PIPELINE_HPP_

// End-to-end experiment: split, train or load the forest, pick the test rows
// the model does not give the desired outcome, explain them natively, then
// release CF-K (and optionally Mondrian) explanations and write reports.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cfk/classifier.hpp"
#include "cfk/csv.hpp"
#include "cfk/dataset.hpp"
#include "cfk/error.hpp"
#include "cfk/forest.hpp"
#include "cfk/generalization.hpp"
#include "cfk/grasp.hpp"
#include "cfk/metrics.hpp"
#include "cfk/mondrian.hpp"
#include "cfk/neighbors.hpp"
#include "cfk/parallel.hpp"
#include "cfk/schema.hpp"
#include "json.hpp"

namespace cfk {

enum class MondrianSource { kTrain, kTest };

inline MondrianSource parse_mondrian_source(std::string_view s) {
  if (s == "train") return MondrianSource::kTrain;
  if (s == "test") return MondrianSource::kTest;
  throw Error("unknown Mondrian source '" + std::string(s) + "' (expected train or test)");
}

struct ExperimentConfig {
  std::filesystem::path config_path;
  DatasetConfig dataset;
  TuningGrid grid;
  CfkParams cfk;
  std::vector<std::size_t> k_sweep{2, 5, 10, 20};
  std::size_t max_explanations = 1000;
  bool baseline = false;
  MondrianSource mondrian_source = MondrianSource::kTrain;
  std::filesystem::path output_dir = "out";
  std::optional<std::filesystem::path> model_path;  // load instead of training
  unsigned threads = 1;
  // Off: elapsed_seconds is written as 0 so reports are byte-reproducible.
  bool record_timing = true;

  void validate() const {
    dataset.validate();
    cfk.validate();
    if (k_sweep.empty()) throw Error("k_sweep is empty");
    if (!std::is_sorted(k_sweep.begin(), k_sweep.end()) ||
        std::adjacent_find(k_sweep.begin(), k_sweep.end()) != k_sweep.end()) {
      throw Error("k_sweep must be strictly ascending");
    }
    if (k_sweep.front() == 0) throw Error("k_sweep values must be positive");
    if (max_explanations == 0) throw Error("max_explanations must be at least 1");
    if (dataset.desired_outcome.empty()) throw Error("desired_outcome is not set");
  }
};

// The schema config may carry optional "grid", "cfk" and "experiment"
// sections next to the dataset description.
inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j,
                                                    const std::filesystem::path& base_dir = {}) {
  ExperimentConfig c;
  c.dataset = dataset_config_from_json(j, base_dir);
  try {
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      if (g.contains("n_estimators")) {
        c.grid.n_estimators_options = g.at("n_estimators").get<std::vector<std::size_t>>();
      }
      if (g.contains("max_leaf_nodes")) {
        c.grid.max_leaf_nodes_options.clear();
        for (const auto& v : g.at("max_leaf_nodes")) {
          c.grid.max_leaf_nodes_options.push_back(v.is_null() ? LeafLimit{}
                                                              : LeafLimit{v.get<std::size_t>()});
        }
      }
      c.grid.cv_folds = g.value("cv_folds", c.grid.cv_folds);
      c.grid.tuning_seed = g.value("seed", c.grid.tuning_seed);
    }
    if (j.contains("cfk")) {
      const auto& p = j.at("cfk");
      c.cfk.k = p.value("k", c.cfk.k);
      c.cfk.alpha = p.value("alpha", c.cfk.alpha);
      c.cfk.max_iter = p.value("max_iter", c.cfk.max_iter);
      c.cfk.pureness_samples = p.value("pureness_samples", c.cfk.pureness_samples);
      c.cfk.search_samples = p.value("search_samples", c.cfk.search_samples);
      c.cfk.seed = p.value("seed", c.cfk.seed);
      if (p.contains("objective")) c.cfk.objective = parse_objective(p.at("objective").get<std::string>());
    }
    if (j.contains("experiment")) {
      const auto& e = j.at("experiment");
      if (e.contains("k_sweep")) c.k_sweep = e.at("k_sweep").get<std::vector<std::size_t>>();
      c.max_explanations = e.value("max_explanations", c.max_explanations);
      c.baseline = e.value("baseline", c.baseline);
      if (e.contains("mondrian_source")) {
        c.mondrian_source = parse_mondrian_source(e.at("mondrian_source").get<std::string>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed experiment config: ") + e.what());
  }
  return c;
}

inline ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  ExperimentConfig c = experiment_config_from_json(read_json_file(path), path.parent_path());
  c.config_path = path;
  return c;
}

struct ReportRow {
  std::size_t explanation_id = 0;
  Group group = Group::kMajority;
  std::string method;  // "CFK" or "Mondrian"
  std::size_t k = 0;
  double ncp = 0.0;
  double pureness = 0.0;
  std::size_t k_degree = 0;
  double elapsed_seconds = 0.0;
};

// A released explanation alongside its report row.
struct ExplanationRow {
  std::size_t explanation_id = 0;
  std::int64_t factual_row_id = 0;
  std::int64_t counterfactual_row_id = 0;
  std::string method;
  std::size_t k = 0;
  std::string rendered;
};

struct PipelineResult {
  std::vector<ReportRow> rows;
  std::vector<ExplanationRow> explanations;
};

class Experiment {
 public:
  explicit Experiment(ExperimentConfig config)
      : config_(std::move(config)),
        data_(load_dataset(config_.dataset, &load_stats_)),
        parts_(split(data_, config_.dataset.split_fraction, config_.dataset.split_seed)) {
    config_.validate();
    const Schema& schema = data_.schema();
    const auto desired = schema.attribute(schema.target()).code_of(config_.dataset.desired_outcome);
    if (!desired) {
      throw Error("desired_outcome '" + config_.dataset.desired_outcome +
                  "' is not a value of the target attribute");
    }
    desired_ = *desired;
  }

  const ExperimentConfig& config() const { return config_; }
  ExperimentConfig& mutable_config() { return config_; }
  const LoadStats& load_stats() const { return load_stats_; }
  const Dataset& data() const { return data_; }
  const Dataset& train() const { return parts_.first; }
  const Dataset& test() const { return parts_.second; }
  int desired() const { return desired_; }

  const RandomForest& model() {
    if (!model_) {
      if (config_.model_path) {
        RandomForest m = RandomForest::from_json(read_json_file(*config_.model_path));
        if (m.num_classes() != train().schema().attribute(train().schema().target()).labels.size()) {
          throw Error("model " + config_.model_path->string() +
                      " does not match the dataset's target classes");
        }
        model_ = std::move(m);
      } else {
        TuningGrid grid = config_.grid;
        grid.threads = config_.threads;
        model_ = cfk::train(train(), grid, &cv_cells_);
      }
    }
    return *model_;
  }

  void set_model(RandomForest model) {
    model_ = std::move(model);
    train_predictions_.clear();
  }

  const std::vector<CvCell>& cv_cells() const { return cv_cells_; }

  const std::vector<int>& train_predictions() {
    if (train_predictions_.empty()) train_predictions_ = predict_all(model(), train());
    return train_predictions_;
  }

  // First max_explanations test rows (row order) the model does not give the
  // desired outcome.
  std::vector<std::size_t> factual_positions() {
    const std::vector<int> predictions = predict_all(model(), test());
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < test().size() && out.size() < config_.max_explanations; ++i) {
      if (predictions[i] != desired_) out.push_back(i);
    }
    return out;
  }

  std::vector<CounterfactualResult> native_counterfactuals() {
    const std::vector<std::size_t> positions = factual_positions();
    const std::vector<int>& preds = train_predictions();
    const RandomForest& m = model();
    std::vector<CounterfactualResult> out(positions.size());
    parallel_for(positions.size(), config_.threads, [&](std::size_t i) {
      try {
        out[i] = nearest_unlike_neighbor(test()[positions[i]], train(), preds, m, desired_);
      } catch (const std::exception& e) {
        throw Error(stage_error(i, test()[positions[i]].row_id, "native counterfactual", e));
      }
    });
    return out;
  }

  // CF-K (and Mondrian when config.baseline) for every k in `ks`.
  PipelineResult run(const std::vector<CounterfactualResult>& counterfactuals,
                     const std::vector<std::size_t>& ks) {
    const RandomForest& m = model();
    const std::vector<int>& preds = train_predictions();
    const Schema& schema = train().schema();
    PipelineResult result;
    const std::size_t methods = config_.baseline ? 2 : 1;
    for (std::size_t k : ks) {
      CfkParams params = config_.cfk;
      params.k = k;
      const Anonymizer anonymizer(train(), m, preds, params);

      std::optional<AnonymizedDataset> anonymized;
      std::vector<int> source_preds;
      if (config_.baseline) {
        const Dataset& source =
            config_.mondrian_source == MondrianSource::kTrain ? train() : test();
        try {
          anonymized = mondrian(source, k);
        } catch (const std::exception& e) {
          throw Error("k=" + std::to_string(k) + ", stage Mondrian partitioning: " + e.what());
        }
        source_preds = config_.mondrian_source == MondrianSource::kTrain ? preds
                                                                        : predict_all(m, source);
      }

      std::vector<ReportRow> rows(counterfactuals.size() * methods);
      std::vector<ExplanationRow> released(rows.size());
      parallel_for(counterfactuals.size(), config_.threads, [&](std::size_t i) {
        const CounterfactualResult& cf = counterfactuals[i];
        const Group group = group_of(cf.factual, schema, config_.dataset);
        std::string stage = "CF-K";
        try {
          const CfkSolution s = anonymizer.anonymize(cf);
          check_k_degree(s.instance, train(), k);
          rows[i * methods] = make_row(i, group, "CFK", k, s.report);
          released[i * methods] = {i, cf.factual.row_id, cf.counterfactual.row_id, "CFK", k,
                                   render(s.instance)};
          if (anonymized) {
            stage = "Mondrian baseline";
            const auto started = std::chrono::steady_clock::now();
            GeneralizedInstance g =
                baseline_explanation(cf.factual, *anonymized, source_preds, m, desired_);
            MetricReport r = anonymizer.report(g, desired_);
            r.elapsed_seconds = std::chrono::duration<double>(
                                    std::chrono::steady_clock::now() - started)
                                    .count();
            // The cover guarantees k rows of the partitioned source.
            r.k_degree = k_degree(g, anonymized->source());
            check_k_degree(g, anonymized->source(), k);
            rows[i * methods + 1] = make_row(i, group, "Mondrian", k, r);
            released[i * methods + 1] = {i, cf.factual.row_id, g.base().row_id, "Mondrian", k,
                                         render(g)};
          }
        } catch (const std::exception& e) {
          throw Error(stage_error(i, cf.factual.row_id, stage + " at k=" + std::to_string(k), e));
        }
      });
      result.rows.insert(result.rows.end(), rows.begin(), rows.end());
      result.explanations.insert(result.explanations.end(), released.begin(), released.end());
    }
    return result;
  }

  PipelineResult run(const std::vector<std::size_t>& ks) {
    return run(native_counterfactuals(), ks);
  }

 private:
  ReportRow make_row(std::size_t id, Group group, std::string method, std::size_t k,
                     const MetricReport& r) const {
    return ReportRow{id, group, std::move(method), k, r.ncp, r.pureness.value, r.k_degree,
                     config_.record_timing ? r.elapsed_seconds : 0.0};
  }

  static void check_k_degree(const GeneralizedInstance& g, const Dataset& population,
                             std::size_t k) {
    std::size_t count = 0;
    for (const Record& r : population.records()) count += covers(g, r) ? 1 : 0;
    if (count < k) {
      throw Error("released explanation covers " + std::to_string(count) + " rows, fewer than k=" +
                  std::to_string(k));
    }
  }

  static std::string stage_error(std::size_t id, std::int64_t row_id, const std::string& stage,
                                 const std::exception& e) {
    return "explanation " + std::to_string(id) + " (test row " + std::to_string(row_id) +
           "), stage " + stage + ": " + e.what();
  }

  ExperimentConfig config_;
  LoadStats load_stats_;
  Dataset data_;
  std::pair<Dataset, Dataset> parts_;
  int desired_ = 0;
  std::optional<RandomForest> model_;
  std::vector<CvCell> cv_cells_;
  std::vector<int> train_predictions_;
};

// ---- aggregation ----------------------------------------------------------

struct Aggregate {
  std::string method;
  std::size_t k = 0;
  std::string group;  // "All", "Minority" or "Majority"
  std::size_t count = 0;
  double mean_ncp = 0.0;
  double mean_pureness = 0.0;
  double mean_k_degree = 0.0;
  double mean_elapsed_seconds = 0.0;
};

namespace detail {

inline int method_order(const std::string& m) { return m == "CFK" ? 0 : m == "Mondrian" ? 1 : 2; }

struct AggregateKey {
  int order;
  std::string method;
  std::size_t k;
  int group;  // 0 All, 1 Minority, 2 Majority

  auto operator<=>(const AggregateKey&) const = default;
};

}  // namespace detail

// Arithmetic means per (method, k) overall and per group. Groups without rows
// are absent.
inline std::vector<Aggregate> aggregate(const std::vector<ReportRow>& rows) {
  struct Sum {
    std::size_t n = 0;
    double ncp = 0, pureness = 0, k_degree = 0, elapsed = 0;
  };
  std::map<detail::AggregateKey, Sum> sums;
  for (const ReportRow& r : rows) {
    const int g = r.group == Group::kMinority ? 1 : 2;
    for (int key_group : {0, g}) {
      Sum& s = sums[{detail::method_order(r.method), r.method, r.k, key_group}];
      ++s.n;
      s.ncp += r.ncp;
      s.pureness += r.pureness;
      s.k_degree += static_cast<double>(r.k_degree);
      s.elapsed += r.elapsed_seconds;
    }
  }
  static constexpr const char* kGroups[] = {"All", "Minority", "Majority"};
  std::vector<Aggregate> out;
  for (const auto& [key, s] : sums) {
    const double n = static_cast<double>(s.n);
    out.push_back({key.method, key.k, kGroups[key.group], s.n, s.ncp / n, s.pureness / n,
                   s.k_degree / n, s.elapsed / n});
  }
  return out;
}

inline std::optional<Aggregate> find_aggregate(const std::vector<Aggregate>& all,
                                               const std::string& method, std::size_t k,
                                               const std::string& group = "All") {
  for (const Aggregate& a : all) {
    if (a.method == method && a.k == k && a.group == group) return a;
  }
  return std::nullopt;
}

struct FairnessRow {
  std::string method;
  std::size_t k = 0;
  std::optional<Aggregate> minority;
  std::optional<Aggregate> majority;
  // minority - majority; absent unless both groups have explanations
  std::optional<double> ncp_gap;
  std::optional<double> pureness_gap;
};

inline std::vector<FairnessRow> fairness_report(const std::vector<ReportRow>& rows) {
  if (rows.empty()) throw Error("fairness report needs at least one report row");
  const std::vector<Aggregate> all = aggregate(rows);
  std::vector<FairnessRow> out;
  for (const Aggregate& a : all) {
    if (a.group != "All") continue;
    FairnessRow f{a.method, a.k, find_aggregate(all, a.method, a.k, "Minority"),
                  find_aggregate(all, a.method, a.k, "Majority"), std::nullopt, std::nullopt};
    if (f.minority && f.majority) {
      f.ncp_gap = f.minority->mean_ncp - f.majority->mean_ncp;
      f.pureness_gap = f.minority->mean_pureness - f.majority->mean_pureness;
    }
    out.push_back(std::move(f));
  }
  return out;
}

// ---- report files ---------------------------------------------------------

inline void write_report(const std::vector<ReportRow>& rows, std::ostream& out) {
  csv::write_row(out, {"explanation_id", "group", "method", "k", "ncp", "pureness", "k_degree",
                       "elapsed_seconds"});
  for (const ReportRow& r : rows) {
    csv::write_row(out, {std::to_string(r.explanation_id), std::string(to_string(r.group)),
                         r.method, std::to_string(r.k), csv::format_fixed(r.ncp),
                         csv::format_fixed(r.pureness), std::to_string(r.k_degree),
                         csv::format_fixed(r.elapsed_seconds)});
  }
}

inline void write_aggregate(const std::vector<Aggregate>& all, std::ostream& out) {
  csv::write_row(out, {"method", "k", "group", "count", "mean_ncp", "mean_pureness",
                       "mean_k_degree", "mean_elapsed_seconds"});
  for (const Aggregate& a : all) {
    csv::write_row(out, {a.method, std::to_string(a.k), a.group, std::to_string(a.count),
                         csv::format_fixed(a.mean_ncp), csv::format_fixed(a.mean_pureness),
                         csv::format_fixed(a.mean_k_degree),
                         csv::format_fixed(a.mean_elapsed_seconds)});
  }
}

inline void write_fairness(const std::vector<FairnessRow>& rows, std::ostream& out) {
  const auto opt = [](const std::optional<double>& v) {
    return v ? csv::format_fixed(*v) : std::string();
  };
  const auto count = [](const std::optional<Aggregate>& a) {
    return a ? std::to_string(a->count) : std::string("0");
  };
  csv::write_row(out, {"method", "k", "minority_count", "minority_mean_ncp",
                       "minority_mean_pureness", "majority_count", "majority_mean_ncp",
                       "majority_mean_pureness", "ncp_gap", "pureness_gap"});
  for (const FairnessRow& f : rows) {
    const auto field = [&](const std::optional<Aggregate>& a, bool ncp_field) {
      return a ? csv::format_fixed(ncp_field ? a->mean_ncp : a->mean_pureness) : std::string();
    };
    csv::write_row(out, {f.method, std::to_string(f.k), count(f.minority),
                         field(f.minority, true), field(f.minority, false), count(f.majority),
                         field(f.majority, true), field(f.majority, false), opt(f.ncp_gap),
                         opt(f.pureness_gap)});
  }
}

// Per (method, k): explanations sorted by NCP ascending, ties by id.
inline void write_sorted_ncp(const std::vector<ReportRow>& rows, const std::string& method,
                             std::size_t k, std::ostream& out) {
  std::vector<const ReportRow*> picked;
  for (const ReportRow& r : rows) {
    if (r.method == method && r.k == k) picked.push_back(&r);
  }
  std::sort(picked.begin(), picked.end(), [](const ReportRow* a, const ReportRow* b) {
    return std::tie(a->ncp, a->explanation_id) < std::tie(b->ncp, b->explanation_id);
  });
  csv::write_row(out, {"rank", "explanation_id", "ncp"});
  for (std::size_t i = 0; i < picked.size(); ++i) {
    csv::write_row(out, {std::to_string(i + 1), std::to_string(picked[i]->explanation_id),
                         csv::format_fixed(picked[i]->ncp)});
  }
}

inline void write_explanations(const std::vector<ExplanationRow>& rows, std::ostream& out) {
  csv::write_row(out, {"explanation_id", "factual_row_id", "counterfactual_row_id", "method", "k",
                       "explanation"});
  for (const ExplanationRow& r : rows) {
    csv::write_row(out, {std::to_string(r.explanation_id), std::to_string(r.factual_row_id),
                         std::to_string(r.counterfactual_row_id), r.method, std::to_string(r.k),
                         r.rendered});
  }
}

// Native counterfactuals, re-readable by read_counterfactuals.
inline void write_counterfactuals(const std::vector<CounterfactualResult>& cfs,
                                  const Dataset& train, std::ostream& out) {
  const Schema& schema = train.schema();
  csv::write_row(out, {"explanation_id", "factual_row_id", "counterfactual_row_id",
                       "desired_outcome", "distance", "counterfactual"});
  for (std::size_t i = 0; i < cfs.size(); ++i) {
    const CounterfactualResult& c = cfs[i];
    csv::write_row(out, {std::to_string(i), std::to_string(c.factual.row_id),
                         std::to_string(c.counterfactual.row_id),
                         schema.label(schema.target(), c.desired_outcome),
                         csv::format_fixed(c.distance),
                         render(GeneralizedInstance(train.schema_ptr(), c.counterfactual))});
  }
}

inline std::vector<CounterfactualResult> read_counterfactuals(std::istream& in,
                                                              const Dataset& data,
                                                              const Dataset& train,
                                                              const Classifier& model) {
  const Schema& schema = train.schema();
  std::string line;
  if (!csv::next_line(in, line, true)) throw Error("counterfactual file is empty");
  const std::vector<std::string> header = csv::split_line(line);
  if (header.size() < 5 || header[1] != "factual_row_id" || header[2] != "counterfactual_row_id") {
    throw Error("counterfactual file has an unexpected header");
  }
  std::vector<CounterfactualResult> out;
  while (csv::next_line(in, line)) {
    const std::vector<std::string> f = csv::split_line(line);
    if (f.size() < 5) throw Error("counterfactual file: short line '" + line + "'");
    const auto factual_id = csv::parse_number(f[1]);
    const auto cf_id = csv::parse_number(f[2]);
    if (!factual_id || !cf_id) throw Error("counterfactual file: bad row id in '" + line + "'");
    const auto fp = data.position_of(static_cast<std::int64_t>(*factual_id));
    const auto cp = train.position_of(static_cast<std::int64_t>(*cf_id));
    if (!fp || !cp) throw Error("counterfactual file: row id not found in '" + line + "'");
    const auto desired = schema.attribute(schema.target()).code_of(f[3]);
    if (!desired) throw Error("counterfactual file: unknown outcome '" + f[3] + "'");
    CounterfactualResult c{data[*fp], train[*cp], *desired, 0.0};
    c.distance = DistanceMetric::over_predictors(train)(c.factual.values, c.counterfactual.values);
    if (model.predict(c.counterfactual.values) != c.desired_outcome) {
      throw Error("counterfactual file: row " + f[2] +
                  " no longer has the desired prediction under this model");
    }
    out.push_back(std::move(c));
  }
  return out;
}

inline std::string method_file_tag(const std::string& method) {
  std::string tag = method;
  std::transform(tag.begin(), tag.end(), tag.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return tag;
}

// report.csv, aggregate.csv, explanations.csv and sorted_ncp_<method>_<k>.csv
// under `dir`; fairness.csv too when `with_fairness`.
inline std::vector<std::filesystem::path> write_reports(const PipelineResult& result,
                                                        const std::filesystem::path& dir,
                                                        bool with_fairness = false) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  const auto open = [&](const std::string& name) {
    written.push_back(dir / name);
    std::ofstream out(written.back(), std::ios::binary);
    if (!out) throw Error("cannot write " + written.back().string());
    return out;
  };
  {
    auto out = open("report.csv");
    write_report(result.rows, out);
  }
  const std::vector<Aggregate> all = aggregate(result.rows);
  {
    auto out = open("aggregate.csv");
    write_aggregate(all, out);
  }
  {
    auto out = open("explanations.csv");
    write_explanations(result.explanations, out);
  }
  for (const Aggregate& a : all) {
    if (a.group != "All") continue;
    auto out = open("sorted_ncp_" + method_file_tag(a.method) + "_" + std::to_string(a.k) + ".csv");
    write_sorted_ncp(result.rows, a.method, a.k, out);
  }
  if (with_fairness && !result.rows.empty()) {
    auto out = open("fairness.csv");
    write_fairness(fairness_report(result.rows), out);
  }
  return written;
}

// Full pipeline over config.k_sweep; writes reports to config.output_dir.
inline PipelineResult run_pipeline(const ExperimentConfig& config, bool with_fairness = false) {
  Experiment experiment(config);
  PipelineResult result = experiment.run(config.k_sweep);
  write_reports(result, config.output_dir, with_fairness);
  return result;
}

}  // namespace cfk

#endif  // CFK_PIPELINE_HPP_
