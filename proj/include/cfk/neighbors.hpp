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

#ifndef CFK_NEIGHBORS_HPP_
#define CFK_NEIGHBORS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cfk/classifier.hpp"
#include "cfk/dataset.hpp"
#include "cfk/error.hpp"
#include "cfk/generalization.hpp"

namespace cfk {

// Heterogeneous overlap distance: numeric attributes contribute
// |a-b| / (train max - min), capped at 1 (0 when the range is 0);
// categorical attributes contribute 0 if equal and 1 otherwise.
class DistanceMetric {
 public:
  DistanceMetric(const Dataset& train, std::vector<std::size_t> attributes)
      : attributes_(std::move(attributes)) {
    const Schema& schema = train.schema();
    width_ = schema.size();
    for (std::size_t a : attributes_) {
      const Attribute& attr = schema.attribute(a);
      numeric_.push_back(attr.numeric());
      range_.push_back(attr.numeric() ? train.summary(a).range() : 0.0);
    }
  }

  static DistanceMetric over_predictors(const Dataset& train) {
    return DistanceMetric(train, train.schema().predictors());
  }
  static DistanceMetric over_quasi_identifiers(const Dataset& train) {
    return DistanceMetric(train, train.schema().quasi_identifiers());
  }

  const std::vector<std::size_t>& attributes() const { return attributes_; }

  double operator()(std::span<const double> a, std::span<const double> b) const {
    check(a);
    check(b);
    double d = 0.0;
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
      d += term(i, std::abs(a[attributes_[i]] - b[attributes_[i]]));
    }
    return d;
  }

  // Distance from the nearest point g covers: masked quasi-identifiers use
  // their generalized value, every other masked attribute uses g's base.
  double operator()(const GeneralizedInstance& g, std::span<const double> point) const {
    check(point);
    const auto& qids = g.schema().quasi_identifiers();
    double d = 0.0;
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
      const std::size_t a = attributes_[i];
      const double v = point[a];
      const auto q = std::find(qids.begin(), qids.end(), a);
      if (q == qids.end()) {
        d += term(i, std::abs(g.base().values[a] - v));
        continue;
      }
      const GeneralizedValue& gv = g.qid(static_cast<std::size_t>(q - qids.begin()));
      if (gv.contains(v)) continue;
      if (gv.is_interval()) {
        const Interval& iv = gv.interval();
        d += term(i, v < iv.lo ? iv.lo - v : v - iv.hi);
      } else {
        d += 1.0;
      }
    }
    return d;
  }

 private:
  double term(std::size_t i, double gap) const {
    if (!numeric_[i]) return gap == 0.0 ? 0.0 : 1.0;
    if (range_[i] <= 0.0) return 0.0;
    return std::min(1.0, gap / range_[i]);
  }

  void check(std::span<const double> v) const {
    if (v.size() != width_) {
      throw Error("instance has " + std::to_string(v.size()) +
                  " values; every masked attribute needs a value (schema width " +
                  std::to_string(width_) + ")");
    }
  }

  std::vector<std::size_t> attributes_;
  std::vector<bool> numeric_;
  std::vector<double> range_;
  std::size_t width_ = 0;
};

// A native counterfactual: a real training row the model labels differently.
struct CounterfactualResult {
  Record factual;
  Record counterfactual;
  int desired_outcome = 0;
  double distance = 0.0;
};

// Nearest training row (over all predictor attributes) whose prediction
// differs from the factual's; with `desired`, the prediction must equal it.
// Ties go to the lowest row id.
inline CounterfactualResult nearest_unlike_neighbor(const Record& factual, const Dataset& train,
                                                    std::span<const int> train_predictions,
                                                    const Classifier& model,
                                                    std::optional<int> desired = std::nullopt) {
  if (train_predictions.size() != train.size()) {
    throw Error("train_predictions does not match the training set");
  }
  const int own = model.predict(factual.values);
  const DistanceMetric metric = DistanceMetric::over_predictors(train);
  std::optional<std::size_t> best;
  double best_distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < train.size(); ++i) {
    const int label = train_predictions[i];
    if (label == own || (desired && label != *desired)) continue;
    const double d = metric(factual.values, train[i].values);
    if (!best || d < best_distance ||
        (d == best_distance && train[i].row_id < train[*best].row_id)) {
      best = i;
      best_distance = d;
    }
  }
  if (!best) {
    throw Error("no unlike rows: every training row shares the factual's prediction" +
                std::string(desired ? " or differs from the desired outcome" : ""));
  }
  return CounterfactualResult{factual, train[*best], train_predictions[*best], best_distance};
}

inline CounterfactualResult nearest_unlike_neighbor(const Record& factual, const Dataset& train,
                                                    const Classifier& model,
                                                    std::optional<int> desired = std::nullopt) {
  const std::vector<int> predictions = predict_all(model, train);
  return nearest_unlike_neighbor(factual, train, predictions, model, desired);
}

struct Neighbor {
  std::size_t position = 0;  // index into the training set
  double distance = 0.0;
};

// The alpha rows nearest to `center` (quasi-identifier distance from the
// generalized values) among rows predicted `desired` and not yet covered.
// Sorted by distance, then row id. Throws InfeasibleError if none qualify.
inline std::vector<Neighbor> candidate_list(const GeneralizedInstance& center, const Dataset& train,
                                            std::span<const int> train_predictions, int desired,
                                            std::size_t alpha, const DistanceMetric& metric) {
  if (alpha == 0) throw Error("alpha must be at least 1");
  std::vector<Neighbor> eligible;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (train_predictions[i] != desired || covers(center, train[i])) continue;
    eligible.push_back(Neighbor{i, metric(center, train[i].values)});
  }
  if (eligible.empty()) {
    throw InfeasibleError("no uncovered training rows with the desired outcome remain");
  }
  const auto less = [&](const Neighbor& a, const Neighbor& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return train[a.position].row_id < train[b.position].row_id;
  };
  const std::size_t keep = std::min(alpha, eligible.size());
  std::partial_sort(eligible.begin(), eligible.begin() + static_cast<std::ptrdiff_t>(keep),
                    eligible.end(), less);
  eligible.resize(keep);
  return eligible;
}

inline std::vector<Neighbor> candidate_list(const GeneralizedInstance& center, const Dataset& train,
                                            const Classifier& model, int desired,
                                            std::size_t alpha) {
  const std::vector<int> predictions = predict_all(model, train);
  return candidate_list(center, train, predictions, desired, alpha,
                        DistanceMetric::over_quasi_identifiers(train));
}

}  // namespace cfk

#endif  // CFK_NEIGHBORS_HPP_
