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

#ifndef CFK_FOREST_HPP_
#define CFK_FOREST_HPP_

// Random-forest classifier: bootstrap-sampled CART trees on Gini impurity,
// sqrt(#features) candidate features per split, majority vote. Tuned over a
// grid of (n_estimators, max_leaf_nodes) by stratified k-fold accuracy.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cfk/classifier.hpp"
#include "cfk/dataset.hpp"
#include "cfk/error.hpp"
#include "cfk/parallel.hpp"
#include "cfk/rng.hpp"
#include "json.hpp"

namespace cfk {

// nullopt means unbounded: growth stops only at pure (or unsplittable) nodes.
using LeafLimit = std::optional<std::size_t>;

struct TreeNode {
  int feature = -1;  // schema attribute index; -1 marks a leaf
  // Numeric: value <= threshold goes left. Categorical: value == threshold
  // (a label code) goes left.
  double threshold = 0.0;
  bool categorical = false;
  int left = -1;
  int right = -1;
  std::vector<int> counts;  // class counts of the bootstrap rows reaching a leaf
  int label = 0;

  bool leaf() const { return feature < 0; }
};

class DecisionTree {
 public:
  DecisionTree() = default;
  explicit DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  int predict(std::span<const double> values) const {
    std::size_t i = 0;
    while (!nodes_[i].leaf()) {
      const TreeNode& n = nodes_[i];
      const double v = values[static_cast<std::size_t>(n.feature)];
      const bool go_left = n.categorical ? v == n.threshold : v <= n.threshold;
      i = static_cast<std::size_t>(go_left ? n.left : n.right);
    }
    return nodes_[i].label;
  }

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t leaf_count() const {
    return static_cast<std::size_t>(std::count_if(
        nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.leaf(); }));
  }

 private:
  std::vector<TreeNode> nodes_;
};

struct ForestOptions {
  std::size_t n_estimators = 100;
  LeafLimit max_leaf_nodes;
  std::uint64_t seed = 0;
  bool bootstrap = true;  // off: every tree sees each training row once
};

namespace detail {

// Column-major training view: x[attribute][row], y[row].
struct TrainingMatrix {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  std::vector<bool> categorical;
  std::vector<std::size_t> features;
  std::size_t classes = 0;
};

inline TrainingMatrix make_matrix(const Dataset& data) {
  const Schema& schema = data.schema();
  std::vector<const Record*> rows;
  for (const Record& r : data.records()) rows.push_back(&r);
  // Canonical row order makes the model independent of input order.
  std::stable_sort(rows.begin(), rows.end(),
                   [](const Record* a, const Record* b) { return a->row_id < b->row_id; });
  TrainingMatrix m;
  m.x.assign(schema.size(), std::vector<double>(rows.size()));
  m.y.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t a = 0; a < schema.size(); ++a) m.x[a][i] = rows[i]->values[a];
    m.y[i] = static_cast<int>(rows[i]->values[schema.target()]);
  }
  for (const Attribute& a : schema.attributes()) m.categorical.push_back(a.categorical());
  m.features = schema.predictors();
  m.classes = schema.attribute(schema.target()).labels.size();
  return m;
}

inline double weighted_gini(const std::vector<int>& counts, double n) {
  if (n <= 0) return 0.0;
  double sq = 0.0;
  for (int c : counts) sq += static_cast<double>(c) * c;
  return n - sq / n;  // n * gini
}

inline int argmax(const std::vector<int>& counts) {
  return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

struct Split {
  bool valid = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  bool categorical = false;
  double gain = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const TrainingMatrix& m, std::uint64_t seed, LeafLimit max_leaves,
              bool bootstrap = true)
      : m_(m), engine_(seed), max_leaves_(max_leaves), bootstrap_(bootstrap) {
    const auto p = m_.features.size();
    mtry_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(p))));
  }

  // Grows one tree on a bootstrap sample; adds impurity decrease per feature
  // to `importance` (unnormalized).
  DecisionTree build(std::vector<double>& importance) {
    const std::size_t n = m_.y.size();
    std::vector<std::size_t> sample(n);
    for (std::size_t i = 0; i < n; ++i) sample[i] = bootstrap_ ? uniform_index(engine_, n) : i;

    struct Pending {
      double gain;
      int node;
      std::vector<std::size_t> rows;
      Split split;
    };
    auto cmp = [](const Pending& a, const Pending& b) {
      if (a.gain != b.gain) return a.gain < b.gain;
      return a.node > b.node;
    };
    std::priority_queue<Pending, std::vector<Pending>, decltype(cmp)> frontier(cmp);

    std::vector<TreeNode> nodes;
    auto open = [&](std::vector<std::size_t> rows) {
      TreeNode node;
      node.counts.assign(m_.classes, 0);
      for (std::size_t r : rows) ++node.counts[static_cast<std::size_t>(m_.y[r])];
      node.label = argmax(node.counts);
      nodes.push_back(std::move(node));
      const int id = static_cast<int>(nodes.size() - 1);
      const auto& counts = nodes.back().counts;
      const bool pure = std::count_if(counts.begin(), counts.end(), [](int c) { return c > 0; }) <= 1;
      if (!pure) {
        Split s = best_split(rows, counts);
        if (s.valid) frontier.push(Pending{s.gain, id, std::move(rows), s});
      }
    };

    open(std::move(sample));
    std::size_t leaves = 1;
    while (!frontier.empty() && (!max_leaves_ || leaves < *max_leaves_)) {
      Pending p = frontier.top();
      frontier.pop();
      std::vector<std::size_t> left, right;
      const auto& col = m_.x[p.split.feature];
      for (std::size_t r : p.rows) {
        const bool go_left = p.split.categorical ? col[r] == p.split.threshold
                                                 : col[r] <= p.split.threshold;
        (go_left ? left : right).push_back(r);
      }
      importance[p.split.feature] += p.split.gain;
      {
        TreeNode& node = nodes[static_cast<std::size_t>(p.node)];
        node.feature = static_cast<int>(p.split.feature);
        node.threshold = p.split.threshold;
        node.categorical = p.split.categorical;
      }
      const int left_id = static_cast<int>(nodes.size());
      open(std::move(left));
      const int right_id = static_cast<int>(nodes.size());
      open(std::move(right));
      nodes[static_cast<std::size_t>(p.node)].left = left_id;
      nodes[static_cast<std::size_t>(p.node)].right = right_id;
      ++leaves;
    }
    for (TreeNode& node : nodes) {
      if (!node.leaf()) node.counts.clear();
    }
    return DecisionTree(std::move(nodes));
  }

 private:
  Split best_split(const std::vector<std::size_t>& rows, const std::vector<int>& counts) {
    std::vector<std::size_t> order = m_.features;
    shuffle(order, engine_);
    const double parent = weighted_gini(counts, static_cast<double>(rows.size()));
    Split best;
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i >= mtry_ && best.valid) break;
      const std::size_t f = order[i];
      Split s = m_.categorical[f] ? categorical_split(f, rows, counts, parent)
                                  : numeric_split(f, rows, counts, parent);
      if (s.valid && (!best.valid || s.gain > best.gain)) best = s;
    }
    return best;
  }

  Split numeric_split(std::size_t f, const std::vector<std::size_t>& rows,
                      const std::vector<int>& counts, double parent) const {
    const auto& col = m_.x[f];
    std::vector<std::pair<double, int>> items;
    items.reserve(rows.size());
    for (std::size_t r : rows) items.emplace_back(col[r], m_.y[r]);
    std::sort(items.begin(), items.end());
    Split best;
    std::vector<int> left(m_.classes, 0);
    std::vector<int> right = counts;
    const double n = static_cast<double>(items.size());
    for (std::size_t i = 0; i + 1 < items.size(); ++i) {
      ++left[static_cast<std::size_t>(items[i].second)];
      --right[static_cast<std::size_t>(items[i].second)];
      if (items[i].first == items[i + 1].first) continue;
      const double nl = static_cast<double>(i + 1);
      const double gain = parent - weighted_gini(left, nl) - weighted_gini(right, n - nl);
      if (!best.valid || gain > best.gain) {
        best = Split{true, f, 0.5 * (items[i].first + items[i + 1].first), false, gain};
      }
    }
    return best;
  }

  Split categorical_split(std::size_t f, const std::vector<std::size_t>& rows,
                          const std::vector<int>& counts, double parent) const {
    const auto& col = m_.x[f];
    std::vector<std::pair<double, std::vector<int>>> per_value;
    {
      std::vector<double> values;
      for (std::size_t r : rows) values.push_back(col[r]);
      std::sort(values.begin(), values.end());
      values.erase(std::unique(values.begin(), values.end()), values.end());
      for (double v : values) per_value.emplace_back(v, std::vector<int>(m_.classes, 0));
    }
    for (std::size_t r : rows) {
      const auto it = std::lower_bound(
          per_value.begin(), per_value.end(), col[r],
          [](const auto& p, double v) { return p.first < v; });
      ++it->second[static_cast<std::size_t>(m_.y[r])];
    }
    Split best;
    if (per_value.size() < 2) return best;
    const double n = static_cast<double>(rows.size());
    for (const auto& [value, left] : per_value) {
      std::vector<int> right = counts;
      double nl = 0;
      for (std::size_t c = 0; c < left.size(); ++c) {
        right[c] -= left[c];
        nl += left[c];
      }
      const double gain = parent - weighted_gini(left, nl) - weighted_gini(right, n - nl);
      if (!best.valid || gain > best.gain) best = Split{true, f, value, true, gain};
    }
    return best;
  }

  const TrainingMatrix& m_;
  Engine engine_;
  LeafLimit max_leaves_;
  bool bootstrap_ = true;
  std::size_t mtry_ = 1;
};

}  // namespace detail

class RandomForest final : public Classifier {
 public:
  RandomForest() = default;

  static RandomForest fit(const Dataset& train, const ForestOptions& options) {
    if (options.n_estimators == 0) throw Error("n_estimators must be positive");
    if (options.max_leaf_nodes && *options.max_leaf_nodes < 2) {
      throw Error("max_leaf_nodes must be at least 2");
    }
    const detail::TrainingMatrix m = detail::make_matrix(train);
    RandomForest forest;
    forest.classes_ = m.classes;
    forest.max_leaf_nodes_ = options.max_leaf_nodes;
    forest.importances_.assign(train.schema().size(), 0.0);
    for (std::size_t t = 0; t < options.n_estimators; ++t) {
      std::vector<double> gains(train.schema().size(), 0.0);
      detail::TreeBuilder builder(m, derive_seed(options.seed, 0x7eee, t), options.max_leaf_nodes,
                                    options.bootstrap);
      forest.trees_.push_back(builder.build(gains));
      double total = 0.0;
      for (double g : gains) total += g;
      if (total > 0) {
        for (std::size_t a = 0; a < gains.size(); ++a) forest.importances_[a] += gains[a] / total;
      }
    }
    double total = 0.0;
    for (double v : forest.importances_) total += v;
    if (total > 0) {
      for (double& v : forest.importances_) v /= total;
    }
    return forest;
  }

  int predict(std::span<const double> values) const override {
    const std::vector<int> v = votes(values);
    return detail::argmax(v);
  }

  // Per-class vote counts; the predicted class is the first maximum.
  std::vector<int> votes(std::span<const double> values) const {
    std::vector<int> v(classes_, 0);
    for (const DecisionTree& t : trees_) ++v[static_cast<std::size_t>(t.predict(values))];
    return v;
  }

  std::size_t n_estimators() const { return trees_.size(); }
  LeafLimit max_leaf_nodes() const { return max_leaf_nodes_; }
  std::size_t num_classes() const { return classes_; }
  const std::vector<DecisionTree>& trees() const { return trees_; }
  // Indexed by schema attribute; sums to 1, or is all zero when no tree split.
  const std::vector<double>& feature_importances() const { return importances_; }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["classes"] = classes_;
    j["max_leaf_nodes"] = max_leaf_nodes_ ? nlohmann::json(*max_leaf_nodes_) : nlohmann::json();
    j["feature_importances"] = importances_;
    auto& trees = j["trees"] = nlohmann::json::array();
    for (const DecisionTree& t : trees_) {
      nlohmann::json feature = nlohmann::json::array(), threshold = nlohmann::json::array(),
                     categorical = nlohmann::json::array(), left = nlohmann::json::array(),
                     right = nlohmann::json::array(), counts = nlohmann::json::array();
      for (const TreeNode& n : t.nodes()) {
        feature.push_back(n.feature);
        threshold.push_back(n.threshold);
        categorical.push_back(n.categorical);
        left.push_back(n.left);
        right.push_back(n.right);
        counts.push_back(n.counts);
      }
      trees.push_back({{"feature", feature}, {"threshold", threshold},
                       {"categorical", categorical}, {"left", left},
                       {"right", right}, {"counts", counts}});
    }
    return j;
  }

  static RandomForest from_json(const nlohmann::json& j) {
    RandomForest forest;
    try {
      forest.classes_ = j.at("classes").get<std::size_t>();
      if (!j.at("max_leaf_nodes").is_null()) {
        forest.max_leaf_nodes_ = j.at("max_leaf_nodes").get<std::size_t>();
      }
      forest.importances_ = j.at("feature_importances").get<std::vector<double>>();
      for (const auto& t : j.at("trees")) {
        const auto feature = t.at("feature").get<std::vector<int>>();
        const auto threshold = t.at("threshold").get<std::vector<double>>();
        const auto categorical = t.at("categorical").get<std::vector<bool>>();
        const auto left = t.at("left").get<std::vector<int>>();
        const auto right = t.at("right").get<std::vector<int>>();
        const auto counts = t.at("counts").get<std::vector<std::vector<int>>>();
        std::vector<TreeNode> nodes(feature.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) {
          TreeNode& n = nodes[i];
          n.feature = feature.at(i);
          n.threshold = threshold.at(i);
          n.categorical = categorical.at(i);
          n.left = left.at(i);
          n.right = right.at(i);
          n.counts = counts.at(i);
          const int limit = static_cast<int>(nodes.size());
          if (!n.leaf() && (n.left <= 0 || n.right <= 0 || n.left >= limit || n.right >= limit)) {
            throw Error("model tree has an out-of-range child index");
          }
          if (n.leaf()) {
            if (n.counts.size() != forest.classes_) throw Error("model leaf has wrong class count");
            n.label = detail::argmax(n.counts);
          }
        }
        if (nodes.empty()) throw Error("model contains an empty tree");
        forest.trees_.emplace_back(std::move(nodes));
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(std::string("malformed model file: ") + e.what());
    }
    return forest;
  }

 private:
  std::vector<DecisionTree> trees_;
  std::size_t classes_ = 0;
  LeafLimit max_leaf_nodes_;
  std::vector<double> importances_;
};

struct TuningGrid {
  std::vector<std::size_t> n_estimators_options{10, 50, 100};
  std::vector<LeafLimit> max_leaf_nodes_options{10, 100, std::nullopt};
  std::size_t cv_folds = 5;
  std::uint64_t tuning_seed = 0;
  unsigned threads = 1;

  // The grid reported for the published experiments; expensive at 5,000 trees.
  static TuningGrid paper_scale() {
    TuningGrid g;
    g.n_estimators_options = {10, 50, 100, 500, 1000, 5000};
    g.max_leaf_nodes_options = {10, 100, 500, std::nullopt};
    return g;
  }
};

struct CvCell {
  std::size_t n_estimators = 0;
  LeafLimit max_leaf_nodes;
  double mean_accuracy = 0.0;
};

// Picks the grid cell with the best mean stratified-CV accuracy (ties go to
// fewer trees, then fewer leaves) and refits it on all of `train`.
inline RandomForest train(const Dataset& train, const TuningGrid& grid,
                          std::vector<CvCell>* cells_out = nullptr) {
  if (grid.n_estimators_options.empty() || grid.max_leaf_nodes_options.empty()) {
    throw Error("empty tuning grid");
  }
  if (grid.cv_folds < 2) throw Error("cv_folds must be at least 2");
  for (std::size_t n : grid.n_estimators_options) {
    if (n == 0) throw Error("n_estimators options must be positive");
  }
  for (const LeafLimit& l : grid.max_leaf_nodes_options) {
    if (l && *l < 2) throw Error("max_leaf_nodes options must be at least 2");
  }

  std::vector<CvCell> cells;
  {
    auto trees = grid.n_estimators_options;
    std::sort(trees.begin(), trees.end());
    trees.erase(std::unique(trees.begin(), trees.end()), trees.end());
    auto leaves = grid.max_leaf_nodes_options;
    std::sort(leaves.begin(), leaves.end(), [](const LeafLimit& a, const LeafLimit& b) {
      if (!a || !b) return a.has_value() && !b.has_value();
      return *a < *b;
    });
    leaves.erase(std::unique(leaves.begin(), leaves.end()), leaves.end());
    for (std::size_t t : trees) {
      for (const LeafLimit& l : leaves) cells.push_back(CvCell{t, l, 0.0});
    }
  }

  const Schema& schema = train.schema();
  const std::size_t classes = schema.attribute(schema.target()).labels.size();
  std::vector<std::vector<std::size_t>> by_class(classes);
  for (std::size_t i = 0; i < train.size(); ++i) {
    by_class[static_cast<std::size_t>(train[i].values[schema.target()])].push_back(i);
  }
  std::size_t present = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    if (by_class[c].empty()) continue;
    ++present;
    if (by_class[c].size() < grid.cv_folds) {
      throw Error("class '" + schema.attribute(schema.target()).labels[c] + "' has " +
                  std::to_string(by_class[c].size()) + " rows, fewer than " +
                  std::to_string(grid.cv_folds) + " folds");
    }
  }

  std::size_t chosen = 0;
  if (present > 1) {
    std::vector<std::size_t> fold_of(train.size());
    for (std::size_t c = 0; c < classes; ++c) {
      // Shuffle on row ids so fold membership ignores input row order.
      auto& rows = by_class[c];
      std::sort(rows.begin(), rows.end(),
                [&](std::size_t a, std::size_t b) { return train[a].row_id < train[b].row_id; });
      Engine engine(derive_seed(grid.tuning_seed, 0xf01d, c));
      shuffle(rows, engine);
      for (std::size_t i = 0; i < rows.size(); ++i) fold_of[rows[i]] = i % grid.cv_folds;
    }
    std::vector<Dataset> fit_sets, held_out;
    for (std::size_t f = 0; f < grid.cv_folds; ++f) {
      std::vector<std::size_t> in, out;
      for (std::size_t i = 0; i < train.size(); ++i) (fold_of[i] == f ? out : in).push_back(i);
      fit_sets.push_back(train.subset(in));
      held_out.push_back(train.subset(out));
    }
    parallel_for(cells.size(), grid.threads, [&](std::size_t c) {
      double sum = 0.0;
      for (std::size_t f = 0; f < grid.cv_folds; ++f) {
        const RandomForest model = RandomForest::fit(
            fit_sets[f], ForestOptions{cells[c].n_estimators, cells[c].max_leaf_nodes,
                                       derive_seed(grid.tuning_seed, 0xcf, f)});
        std::size_t hits = 0;
        for (const Record& r : held_out[f].records()) {
          hits += model.predict(r.values) == static_cast<int>(r.values[schema.target()]);
        }
        sum += static_cast<double>(hits) / static_cast<double>(held_out[f].size());
      }
      cells[c].mean_accuracy = sum / static_cast<double>(grid.cv_folds);
    });
    for (std::size_t c = 1; c < cells.size(); ++c) {
      if (cells[c].mean_accuracy > cells[chosen].mean_accuracy) chosen = c;
    }
  }
  if (cells_out) *cells_out = cells;
  return RandomForest::fit(train, ForestOptions{cells[chosen].n_estimators,
                                                cells[chosen].max_leaf_nodes,
                                                grid.tuning_seed});
}

// Predictor attributes by descending importance; ties keep schema order.
inline std::vector<std::size_t> feature_importance_rank(const RandomForest& model,
                                                        const Schema& schema) {
  std::vector<std::size_t> order = schema.predictors();
  const auto& imp = model.feature_importances();
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return imp.at(a) > imp.at(b); });
  return order;
}

}  // namespace cfk

#endif  // CFK_FOREST_HPP_
