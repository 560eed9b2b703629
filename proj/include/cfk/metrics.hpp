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

#ifndef CFK_METRICS_HPP_
#define CFK_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "cfk/classifier.hpp"
#include "cfk/dataset.hpp"
#include "cfk/error.hpp"
#include "cfk/generalization.hpp"
#include "cfk/rng.hpp"

namespace cfk {

// Per-quasi-identifier NCP weights, parallel to Schema::quasi_identifiers().
struct NcpWeights {
  std::vector<double> weights;

  static NcpWeights from_schema(const Schema& schema) { return NcpWeights{schema.qid_weights()}; }

  static NcpWeights equal(std::size_t d) {
    return NcpWeights{std::vector<double>(d, 1.0 / static_cast<double>(d))};
  }

  void validate(std::size_t d) const {
    if (weights.size() != d) {
      throw Error("expected " + std::to_string(d) + " NCP weights, got " +
                  std::to_string(weights.size()));
    }
    double total = 0.0;
    for (double w : weights) {
      if (w < 0.0) throw Error("negative NCP weight");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) throw Error("NCP weights must sum to 1");
  }
};

// Penalty of one generalized quasi-identifier against training summaries:
// numeric (hi-lo)/(max-min), 0 for a zero range; categorical 0 for a
// singleton, otherwise |set| / |distinct labels in train|.
inline double ncp_component(const GeneralizedValue& v, const AttributeSummary& summary) {
  if (v.is_interval()) {
    const double range = summary.range();
    if (range <= 0.0) return 0.0;
    return std::min(1.0, (v.interval().hi - v.interval().lo) / range);
  }
  const std::size_t size = v.set().size();
  if (size <= 1) return 0.0;
  return std::min(1.0, static_cast<double>(size) /
                           static_cast<double>(std::max<std::size_t>(1, summary.distinct_count())));
}

inline double ncp(const GeneralizedInstance& g, const Dataset& train, const NcpWeights& weights) {
  const auto& qids = g.schema().quasi_identifiers();
  weights.validate(qids.size());
  double total = 0.0;
  for (std::size_t q = 0; q < qids.size(); ++q) {
    total += weights.weights[q] * ncp_component(g.qid(q), train.summary(qids[q]));
  }
  return total;
}

inline double ncp(const GeneralizedInstance& g, const Dataset& train) {
  return ncp(g, train, NcpWeights::from_schema(g.schema()));
}

// Values each quasi-identifier may take when querying the model: training
// values inside the interval (plus the base value), or the value set.
inline std::vector<std::vector<double>> combination_space(const GeneralizedInstance& g,
                                                          const Dataset& train) {
  const auto& qids = g.schema().quasi_identifiers();
  std::vector<std::vector<double>> space(qids.size());
  for (std::size_t q = 0; q < qids.size(); ++q) {
    const GeneralizedValue& v = g.qid(q);
    if (!v.is_interval()) {
      space[q] = v.set();
      continue;
    }
    const auto& distinct = train.summary(qids[q]).distinct;
    const auto lo = std::lower_bound(distinct.begin(), distinct.end(), v.interval().lo);
    const auto hi = std::upper_bound(distinct.begin(), distinct.end(), v.interval().hi);
    space[q].assign(lo, hi);
    const double base = g.base().values[qids[q]];
    if (!std::binary_search(space[q].begin(), space[q].end(), base)) {
      space[q].insert(std::upper_bound(space[q].begin(), space[q].end(), base), base);
    }
  }
  return space;
}

// Product of list sizes, saturating at UINT64_MAX.
inline std::uint64_t space_size(const std::vector<std::vector<double>>& space) {
  std::uint64_t n = 1;
  for (const auto& values : space) {
    const auto s = static_cast<std::uint64_t>(values.size());
    if (s != 0 && n > std::numeric_limits<std::uint64_t>::max() / s) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    n *= s;
  }
  return n;
}

struct PurenessEstimate {
  double value = 0.0;
  std::uint64_t samples = 0;
  bool exact = false;
  std::uint64_t combination_space_size = 0;
};

inline constexpr std::uint64_t kDefaultExactCap = 10'000;

// Fraction of all value combinations the model maps to `desired`.
// Throws if the combination space exceeds `cap`.
inline PurenessEstimate pureness_exact(const GeneralizedInstance& g, const Dataset& train,
                                       const Classifier& model, int desired,
                                       std::uint64_t cap = kDefaultExactCap) {
  const auto space = combination_space(g, train);
  const std::uint64_t size = space_size(space);
  if (size > cap) {
    throw Error("combination space of " + std::to_string(size) +
                " exceeds the exact-enumeration cap of " + std::to_string(cap));
  }
  const auto& qids = g.schema().quasi_identifiers();
  std::vector<double> row = g.base().values;
  std::vector<std::size_t> digit(space.size(), 0);
  std::uint64_t hits = 0;
  for (std::uint64_t n = 0; n < size; ++n) {
    for (std::size_t q = 0; q < space.size(); ++q) row[qids[q]] = space[q][digit[q]];
    hits += model.predict(row) == desired;
    for (std::size_t q = 0; q < space.size(); ++q) {
      if (++digit[q] < space[q].size()) break;
      digit[q] = 0;
    }
  }
  return PurenessEstimate{static_cast<double>(hits) / static_cast<double>(size), size, true, size};
}

// Estimates pureness from n combinations, each quasi-identifier drawn
// independently and uniformly (with replacement). Sample i depends only on
// (seed, i), so any evaluation order gives the same result. When the whole
// space has at most n combinations and `exact_when_small` is set, the exact
// value is returned instead.
inline PurenessEstimate pureness_sampled(const GeneralizedInstance& g, const Dataset& train,
                                         const Classifier& model, int desired, std::uint64_t n,
                                         std::uint64_t seed, bool exact_when_small = true) {
  if (n == 0) throw Error("pureness sample size must be at least 1");
  const auto space = combination_space(g, train);
  const std::uint64_t size = space_size(space);
  if (exact_when_small && size <= n) return pureness_exact(g, train, model, desired, n);
  const auto& qids = g.schema().quasi_identifiers();
  std::vector<double> row = g.base().values;
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t sample_seed = derive_seed(seed, i);
    for (std::size_t q = 0; q < space.size(); ++q) {
      row[qids[q]] = space[q][bounded(derive_seed(sample_seed, q), space[q].size())];
    }
    hits += model.predict(row) == desired;
  }
  return PurenessEstimate{static_cast<double>(hits) / static_cast<double>(n), n, false, size};
}

struct MetricReport {
  std::size_t k_degree = 0;
  double ncp = 0.0;
  PurenessEstimate pureness;
  double elapsed_seconds = 0.0;
};

}  // namespace cfk

#endif  // CFK_METRICS_HPP_
