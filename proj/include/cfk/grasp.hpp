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

#ifndef CFK_GRASP_HPP_
#define CFK_GRASP_HPP_

// CF-K: makes one native counterfactual k-anonymous with GRASP. Each round
// builds a feasible generalization by merging randomly chosen near
// desired-outcome neighbours, then hill-climbs over single-step moves;
// the best round wins.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cfk/classifier.hpp"
#include "cfk/dataset.hpp"
#include "cfk/error.hpp"
#include "cfk/generalization.hpp"
#include "cfk/metrics.hpp"
#include "cfk/neighbors.hpp"
#include "cfk/rng.hpp"

namespace cfk {

enum class Objective {
  kNcpOnly,
  // Higher pureness first, then lower NCP.
  kLexicographic,
};

inline std::string_view to_string(Objective o) {
  return o == Objective::kNcpOnly ? "ncp" : "lexicographic";
}

inline Objective parse_objective(std::string_view s) {
  if (s == "ncp") return Objective::kNcpOnly;
  if (s == "lexicographic") return Objective::kLexicographic;
  throw Error("unknown objective '" + std::string(s) + "'");
}

struct CfkParams {
  std::size_t k = 10;
  std::size_t alpha = 20;  // candidate-list size
  std::size_t max_iter = 3;
  std::uint64_t pureness_samples = 100;  // final report
  std::uint64_t search_samples = 20;     // per candidate during local search
  std::uint64_t seed = 0;
  Objective objective = Objective::kLexicographic;

  void validate() const {
    if (k == 0 || alpha == 0 || max_iter == 0 || pureness_samples == 0 || search_samples == 0) {
      throw Error("CF-K parameters k, alpha, max_iter and sample sizes must be positive");
    }
  }
};

struct CfkSolution {
  GeneralizedInstance instance;
  MetricReport report;
  std::size_t iterations_used = 0;
  std::size_t construction_merges = 0;  // in the winning round
  std::size_t local_search_moves = 0;   // in the winning round
};

struct SearchScore {
  double pureness = 1.0;
  double ncp = 0.0;
};

inline bool better(const SearchScore& a, const SearchScore& b, Objective objective) {
  if (objective == Objective::kLexicographic && a.pureness != b.pureness) {
    return a.pureness > b.pureness;
  }
  return a.ncp < b.ncp;
}

class Anonymizer {
 public:
  Anonymizer(const Dataset& train, const Classifier& model, CfkParams params)
      : Anonymizer(train, model, predict_all(model, train), params) {}

  Anonymizer(const Dataset& train, const Classifier& model, std::vector<int> train_predictions,
             CfkParams params)
      : train_(train),
        model_(model),
        predictions_(std::move(train_predictions)),
        params_(params),
        qid_metric_(DistanceMetric::over_quasi_identifiers(train)),
        weights_(NcpWeights::from_schema(train.schema())) {
    params_.validate();
    if (predictions_.size() != train_.size()) {
      throw Error("train_predictions does not match the training set");
    }
  }

  const CfkParams& params() const { return params_; }
  std::span<const int> train_predictions() const { return predictions_; }

  struct Construction {
    GeneralizedInstance instance;
    std::size_t merges = 0;
  };

  // Phase 1. Starting from the ungeneralized counterfactual, merges a
  // uniformly chosen member of the alpha nearest uncovered desired-outcome
  // rows until k training rows are covered.
  Construction construct(const CounterfactualResult& base, std::uint64_t iteration_seed) const {
    Construction out{GeneralizedInstance(train_.schema_ptr(), base.counterfactual), 0};
    Engine engine(iteration_seed);
    while (k_degree(out.instance, train_) < params_.k) {
      const std::vector<Neighbor> list = candidate_list(
          out.instance, train_, predictions_, base.desired_outcome, params_.alpha, qid_metric_);
      const Neighbor& pick = list[uniform_index(engine, list.size())];
      out.instance = merge(out.instance, train_[pick.position]);
      ++out.merges;
    }
    return out;
  }

  // Phase 2. Best-improvement hill climbing over moves(); a move is admissible
  // when it keeps k_degree >= k and strictly improves the objective.
  GeneralizedInstance local_search(const GeneralizedInstance& start, int desired,
                                   std::size_t* moves_applied = nullptr) const {
    ScoreCache cache;
    return local_search(start, desired, cache, moves_applied);
  }

  CfkSolution anonymize(const CounterfactualResult& base) const {
    const auto started = std::chrono::steady_clock::now();
    ScoreCache cache;
    std::optional<CfkSolution> best;
    SearchScore best_score;
    for (std::size_t round = 0; round < params_.max_iter; ++round) {
      Construction c = construct(base, derive_seed(params_.seed, round));
      std::size_t applied = 0;
      GeneralizedInstance local =
          local_search(c.instance, base.desired_outcome, cache, &applied);
      const SearchScore s = score(local, base.desired_outcome, cache);
      if (!best || better(s, best_score, params_.objective)) {
        best = CfkSolution{std::move(local), {}, round + 1, c.merges, applied};
        best_score = s;
      }
    }
    best->iterations_used = params_.max_iter;
    best->report = report(best->instance, base.desired_outcome);
    best->report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return std::move(*best);
  }

  // k-degree, NCP and pureness (params.pureness_samples) for any instance.
  // Pureness draws are seeded by the instance itself; params.seed only drives
  // the construction phase.
  MetricReport report(const GeneralizedInstance& g, int desired) const {
    MetricReport r;
    r.k_degree = k_degree(g, train_);
    r.ncp = ncp(g, train_, weights_);
    r.pureness = pureness_sampled(g, train_, model_, desired, params_.pureness_samples,
                                  derive_seed(0x9e9027, g.fingerprint()));
    return r;
  }

  SearchScore score(const GeneralizedInstance& g, int desired) const {
    ScoreCache cache;
    return score(g, desired, cache);
  }

 private:
  using ScoreCache = std::unordered_map<std::uint64_t, SearchScore>;

  SearchScore score(const GeneralizedInstance& g, int desired, ScoreCache& cache) const {
    const std::uint64_t key = g.fingerprint();
    if (const auto it = cache.find(key); it != cache.end()) return it->second;
    SearchScore s;
    s.ncp = ncp(g, train_, weights_);
    if (params_.objective == Objective::kLexicographic) {
      s.pureness = pureness_sampled(g, train_, model_, desired, params_.search_samples,
                                    derive_seed(0x5ea2c4, key))
                       .value;
    }
    cache.emplace(key, s);
    return s;
  }

  GeneralizedInstance local_search(const GeneralizedInstance& start, int desired,
                                   ScoreCache& cache, std::size_t* moves_applied) const {
    GeneralizedInstance current = start;
    SearchScore current_score = score(current, desired, cache);
    std::size_t applied = 0;
    for (;;) {
      std::optional<GeneralizedInstance> best;
      SearchScore best_score;
      for (GeneralizedInstance& m : moves(current, train_)) {
        if (k_degree(m, train_) < params_.k) continue;
        const SearchScore s = score(m, desired, cache);
        if (!better(s, current_score, params_.objective)) continue;
        if (!best || better(s, best_score, params_.objective)) {
          best = std::move(m);
          best_score = s;
        }
      }
      if (!best) break;
      current = std::move(*best);
      current_score = best_score;
      ++applied;
    }
    if (moves_applied) *moves_applied = applied;
    return current;
  }

  const Dataset& train_;
  const Classifier& model_;
  std::vector<int> predictions_;
  CfkParams params_;
  DistanceMetric qid_metric_;
  NcpWeights weights_;
};

// Single-call form of the CF-K pipeline step.
inline CfkSolution anonymize(const CounterfactualResult& base, const Dataset& train,
                             const Classifier& model, const CfkParams& params) {
  return Anonymizer(train, model, params).anonymize(base);
}

}  // namespace cfk

#endif  // CFK_GRASP_HPP_
