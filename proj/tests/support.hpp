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

#ifndef CFK_TESTS_SUPPORT_HPP_
#define CFK_TESTS_SUPPORT_HPP_

// Fixtures and brute-force oracles shared by the unit and acceptance tests.
// The oracles recompute everything from raw records and never call the
// library's metric code.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "cfk/cfk.hpp"

#ifndef CFK_DATA_DIR
#error "CFK_DATA_DIR must point at the data/ fixtures"
#endif

namespace cfk {

// Readable gtest failure output.
inline void PrintTo(const GeneralizedInstance& g, std::ostream* os) { *os << render(g); }

}  // namespace cfk

namespace cfk::testing {

inline std::filesystem::path data_dir() { return CFK_DATA_DIR; }
inline std::filesystem::path toy_config_path() { return data_dir() / "toy" / "toy.json"; }

// The 11-row toy file: the ten training rows followed by the applicant.
inline const Dataset& toy_all() {
  static const Dataset data = load_dataset(load_dataset_config(toy_config_path()));
  return data;
}

// The ten-row training set (summaries recomputed without the applicant).
inline const Dataset& toy_train() {
  static const Dataset train = [] {
    std::vector<std::size_t> rows(10);
    for (std::size_t i = 0; i < 10; ++i) rows[i] = i;
    return toy_all().subset(rows);
  }();
  return train;
}

inline std::size_t toy_row(const std::string& name) {
  static const std::vector<std::string> names = {"Alfred", "Boris", "Casper", "Derek",
                                                 "Edward", "Fiona", "Gina",   "Hilda",
                                                 "Ingrid", "Jade",  "Lisa"};
  return static_cast<std::size_t>(std::find(names.begin(), names.end(), name) - names.begin());
}

inline const Record& toy(const std::string& name) { return toy_all()[toy_row(name)]; }

inline int label_code(const Dataset& d, const std::string& label) {
  return d.schema().code(d.schema().target(), label);
}

// Reproduces the prediction table used for the worked pureness example:
// every training row keeps its label, the two unseen 60K/Single women of age
// 25 and 27 in Antwerp map to Accept and Reject, everything else is Reject.
inline TableModel toy_table_model() {
  const Dataset& all = toy_all();
  const Schema& s = all.schema();
  const int accept = label_code(all, "Accept");
  const int reject = label_code(all, "Reject");
  TableModel model(all.schema_ptr(), reject);
  for (std::size_t i = 0; i < 10; ++i) {
    model.add(all[i].values, static_cast<int>(all[i].values[s.target()]));
  }
  Record probe = toy("Fiona");
  const std::size_t age = *s.find("Age");
  probe.values[age] = 25;
  model.add(probe.values, accept);
  probe.values[age] = 27;
  model.add(probe.values, reject);
  return model;
}

inline GeneralizedInstance point(const Dataset& train, const Record& r) {
  return GeneralizedInstance(train.schema_ptr(), r);
}

// ---- oracles ---------------------------------------------------------------

inline bool oracle_covers(const GeneralizedInstance& g, const Record& r) {
  const auto& qids = g.schema().quasi_identifiers();
  for (std::size_t q = 0; q < qids.size(); ++q) {
    const double v = r.values[qids[q]];
    const GeneralizedValue& gv = g.qid(q);
    if (gv.is_interval()) {
      if (v < gv.interval().lo || v > gv.interval().hi) return false;
    } else {
      bool found = false;
      for (double c : gv.set()) found = found || c == v;
      if (!found) return false;
    }
  }
  return true;
}

inline std::size_t oracle_k_degree(const GeneralizedInstance& g, const Dataset& train) {
  std::size_t n = 0;
  for (const Record& r : train.records()) n += oracle_covers(g, r) ? 1 : 0;
  return n;
}

// Equal weights, denominators from the records themselves.
inline double oracle_ncp(const GeneralizedInstance& g, const Dataset& train) {
  const auto& qids = g.schema().quasi_identifiers();
  double total = 0.0;
  for (std::size_t q = 0; q < qids.size(); ++q) {
    double lo = 1e300, hi = -1e300;
    std::set<double> distinct;
    for (const Record& r : train.records()) {
      lo = std::min(lo, r.values[qids[q]]);
      hi = std::max(hi, r.values[qids[q]]);
      distinct.insert(r.values[qids[q]]);
    }
    const GeneralizedValue& gv = g.qid(q);
    double c = 0.0;
    if (gv.is_interval()) {
      if (hi > lo) c = (gv.interval().hi - gv.interval().lo) / (hi - lo);
    } else if (gv.set().size() > 1) {
      c = static_cast<double>(gv.set().size()) / static_cast<double>(distinct.size());
    }
    // Same operation order as a weighted sum, so results compare bit for bit.
    total += (1.0 / static_cast<double>(qids.size())) * std::min(c, 1.0);
  }
  return total;
}

inline std::vector<std::vector<double>> oracle_space(const GeneralizedInstance& g,
                                                     const Dataset& train) {
  const auto& qids = g.schema().quasi_identifiers();
  std::vector<std::vector<double>> space;
  for (std::size_t q = 0; q < qids.size(); ++q) {
    const GeneralizedValue& gv = g.qid(q);
    std::set<double> values;
    if (gv.is_interval()) {
      values.insert(g.base().values[qids[q]]);
      for (const Record& r : train.records()) {
        const double v = r.values[qids[q]];
        if (v >= gv.interval().lo && v <= gv.interval().hi) values.insert(v);
      }
    } else {
      values.insert(gv.set().begin(), gv.set().end());
    }
    space.emplace_back(values.begin(), values.end());
  }
  return space;
}

// Exact pureness by recursive enumeration; also reports the space size.
inline double oracle_pureness(const GeneralizedInstance& g, const Dataset& train,
                              const Classifier& model, int desired,
                              std::size_t* size_out = nullptr) {
  const auto space = oracle_space(g, train);
  const auto& qids = g.schema().quasi_identifiers();
  std::vector<double> values(g.base().values.begin(), g.base().values.end());
  std::size_t hits = 0, total = 0;
  std::function<void(std::size_t)> walk = [&](std::size_t q) {
    if (q == qids.size()) {
      ++total;
      hits += model.predict(values) == desired ? 1 : 0;
      return;
    }
    for (double v : space[q]) {
      values[qids[q]] = v;
      walk(q + 1);
    }
  };
  walk(0);
  if (size_out) *size_out = total;
  return static_cast<double>(hits) / static_cast<double>(total);
}

// ---- random fixtures -------------------------------------------------------

// Numeric QIDs N*, categorical QIDs C*, one private numeric P, binary target
// Y. Values are small integers so intervals hit many ties.
inline Dataset random_dataset(std::size_t n, std::uint64_t seed, std::size_t numeric_qids,
                              std::size_t categorical_qids, std::size_t cat_levels = 4,
                              int numeric_span = 30) {
  std::vector<Attribute> attrs;
  for (std::size_t i = 0; i < numeric_qids; ++i) {
    attrs.push_back({"N" + std::to_string(i), AttributeKind::kNumeric,
                     AttributeRole::kQuasiIdentifier, {}});
  }
  std::vector<std::string> levels;
  for (std::size_t l = 0; l < cat_levels; ++l) levels.push_back(std::string(1, char('a' + l)));
  for (std::size_t i = 0; i < categorical_qids; ++i) {
    attrs.push_back({"C" + std::to_string(i), AttributeKind::kCategorical,
                     AttributeRole::kQuasiIdentifier, levels});
  }
  attrs.push_back({"P", AttributeKind::kNumeric, AttributeRole::kPrivate, {}});
  attrs.push_back({"Y", AttributeKind::kCategorical, AttributeRole::kTarget, {"no", "yes"}});
  auto schema = Schema::create(std::move(attrs));
  Engine engine(derive_seed(seed, 0x7e57));
  std::vector<Record> records;
  for (std::size_t r = 0; r < n; ++r) {
    Record rec{static_cast<std::int64_t>(r), {}};
    double score = 0.0;
    for (std::size_t i = 0; i < numeric_qids; ++i) {
      const double v = static_cast<double>(uniform_index(engine, numeric_span + 1));
      rec.values.push_back(v);
      score += v / numeric_span;
    }
    for (std::size_t i = 0; i < categorical_qids; ++i) {
      const double c = static_cast<double>(uniform_index(engine, cat_levels));
      rec.values.push_back(c);
      score += c == 0 ? 0.5 : 0.0;
    }
    const double p = static_cast<double>(uniform_index(engine, 100));
    rec.values.push_back(p);
    score += p / 100.0;
    const bool yes = score + 0.3 * static_cast<double>(uniform_index(engine, 3)) >
                     0.5 * static_cast<double>(numeric_qids + 1) + 0.2;
    rec.values.push_back(yes ? 1.0 : 0.0);
    records.push_back(std::move(rec));
  }
  return Dataset(schema, std::move(records));
}

// A fixed nonlinear rule over all predictors; independent of the forest.
class RuleModel final : public Classifier {
 public:
  explicit RuleModel(const Schema& schema) : predictors_(schema.predictors()) {}
  int predict(std::span<const double> values) const override {
    double h = 0.0;
    for (std::size_t i = 0; i < predictors_.size(); ++i) {
      h += std::fmod(values[predictors_[i]] * static_cast<double>(2 * i + 3), 7.0);
    }
    return std::fmod(h, 3.0) < 1.4 ? 1 : 0;
  }

 private:
  std::vector<std::size_t> predictors_;
};

// A random instance around a random base row: numeric QIDs get an interval
// between training values that contains the base value, categorical QIDs a
// random superset of the base label.
inline GeneralizedInstance random_instance(const Dataset& train, Engine& engine) {
  const Record& base = train[uniform_index(engine, train.size())];
  const Schema& s = train.schema();
  std::vector<GeneralizedValue> values;
  for (std::size_t a : s.quasi_identifiers()) {
    const double b = base.values[a];
    if (s.attribute(a).numeric()) {
      const auto& d = train.summary(a).distinct;
      std::vector<double> below, above;
      for (double v : d) (v <= b ? below : above).push_back(v);
      const double lo = below[uniform_index(engine, below.size())];
      const double hi = uniform_index(engine, 2) == 0 || above.empty()
                            ? b
                            : above[uniform_index(engine, above.size())];
      values.emplace_back(Interval{lo, hi});
    } else {
      ValueSet set{b};
      for (double c : train.summary(a).distinct) {
        if (c != b && uniform_index(engine, 3) == 0) set.push_back(c);
      }
      std::sort(set.begin(), set.end());
      values.emplace_back(std::move(set));
    }
  }
  return GeneralizedInstance(train.schema_ptr(), base, std::move(values));
}

// Every instance reachable from the base by widening QIDs to training values:
// numeric intervals [lo, hi] over distinct training values with lo <= base <=
// hi, categorical subsets containing the base label. Calls fn for each.
inline void for_each_generalization(const Dataset& train, const Record& base,
                                    const std::function<void(const GeneralizedInstance&)>& fn) {
  const Schema& s = train.schema();
  const auto& qids = s.quasi_identifiers();
  std::vector<std::vector<GeneralizedValue>> options(qids.size());
  for (std::size_t q = 0; q < qids.size(); ++q) {
    const std::size_t a = qids[q];
    const double b = base.values[a];
    const auto& d = train.summary(a).distinct;
    if (s.attribute(a).numeric()) {
      std::vector<double> los{b}, his{b};
      for (double v : d) {
        if (v < b) los.push_back(v);
        if (v > b) his.push_back(v);
      }
      for (double lo : los) {
        for (double hi : his) options[q].emplace_back(Interval{lo, hi});
      }
    } else {
      std::vector<double> others;
      for (double c : d) {
        if (c != b) others.push_back(c);
      }
      for (std::size_t mask = 0; mask < (std::size_t{1} << others.size()); ++mask) {
        ValueSet set{b};
        for (std::size_t i = 0; i < others.size(); ++i) {
          if (mask >> i & 1) set.push_back(others[i]);
        }
        std::sort(set.begin(), set.end());
        options[q].emplace_back(std::move(set));
      }
    }
  }
  std::vector<GeneralizedValue> current(qids.size(), options[0][0]);
  std::function<void(std::size_t)> walk = [&](std::size_t q) {
    if (q == qids.size()) {
      fn(GeneralizedInstance(train.schema_ptr(), base, current));
      return;
    }
    for (const GeneralizedValue& v : options[q]) {
      current[q] = v;
      walk(q + 1);
    }
  };
  walk(0);
}

}  // namespace cfk::testing

#endif  // CFK_TESTS_SUPPORT_HPP_
