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

#ifndef CFK_GENERALIZATION_HPP_
#define CFK_GENERALIZATION_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cfk/dataset.hpp"
#include "cfk/error.hpp"
#include "cfk/rng.hpp"

namespace cfk {

// Closed numeric interval in attribute units.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const Interval&) const = default;
};

// Sorted, duplicate-free label codes.
using ValueSet = std::vector<double>;

// A widened quasi-identifier value: an Interval on numeric attributes, a
// ValueSet on categorical ones. Singletons are the ungeneralized case.
class GeneralizedValue {
 public:
  GeneralizedValue() = default;
  GeneralizedValue(Interval i) : value_(i) {
    if (!(i.lo <= i.hi)) throw Error("interval with lo > hi");
  }
  GeneralizedValue(ValueSet s) : value_(std::move(s)) {
    auto& set = std::get<ValueSet>(value_);
    if (set.empty()) throw Error("empty value set");
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
  }

  static GeneralizedValue point(const Attribute& a, double v) {
    return a.numeric() ? GeneralizedValue(Interval{v, v}) : GeneralizedValue(ValueSet{v});
  }

  bool is_interval() const { return std::holds_alternative<Interval>(value_); }
  const Interval& interval() const { return std::get<Interval>(value_); }
  const ValueSet& set() const { return std::get<ValueSet>(value_); }

  bool contains(double v) const {
    if (const auto* i = std::get_if<Interval>(&value_)) return i->lo <= v && v <= i->hi;
    const auto& s = std::get<ValueSet>(value_);
    return std::binary_search(s.begin(), s.end(), v);
  }

  bool singleton() const {
    if (const auto* i = std::get_if<Interval>(&value_)) return i->lo == i->hi;
    return std::get<ValueSet>(value_).size() == 1;
  }

  // Smallest cover of this value and v.
  GeneralizedValue widened(double v) const {
    if (const auto* i = std::get_if<Interval>(&value_)) {
      return Interval{std::min(i->lo, v), std::max(i->hi, v)};
    }
    ValueSet s = std::get<ValueSet>(value_);
    s.push_back(v);
    return GeneralizedValue(std::move(s));
  }

  bool operator==(const GeneralizedValue&) const = default;

 private:
  std::variant<Interval, ValueSet> value_;
};

// A counterfactual instance whose quasi-identifiers are widened: one
// GeneralizedValue per schema quasi-identifier (same order). All other
// attributes keep the base record's values. Every value always covers the
// base record.
class GeneralizedInstance {
 public:
  GeneralizedInstance(std::shared_ptr<const Schema> schema, Record base)
      : schema_(std::move(schema)), base_(std::move(base)) {
    if (base_.values.size() != schema_->size()) {
      throw Error("base record width does not match the schema");
    }
    for (std::size_t a : schema_->quasi_identifiers()) {
      qids_.push_back(GeneralizedValue::point(schema_->attribute(a), base_.values[a]));
    }
  }

  GeneralizedInstance(std::shared_ptr<const Schema> schema, Record base,
                      std::vector<GeneralizedValue> qid_values)
      : GeneralizedInstance(std::move(schema), std::move(base)) {
    if (qid_values.size() != qids_.size()) {
      throw Error("expected " + std::to_string(qids_.size()) + " quasi-identifier values");
    }
    for (std::size_t q = 0; q < qid_values.size(); ++q) set(q, std::move(qid_values[q]));
  }

  const Schema& schema() const { return *schema_; }
  const std::shared_ptr<const Schema>& schema_ptr() const { return schema_; }
  const Record& base() const { return base_; }
  // Non-QID values are base().values at the same positions.
  std::span<const double> fixed_values() const { return base_.values; }
  const std::vector<GeneralizedValue>& qid_values() const { return qids_; }
  const GeneralizedValue& qid(std::size_t q) const { return qids_.at(q); }

  void set(std::size_t q, GeneralizedValue value) {
    const std::size_t a = schema_->quasi_identifiers().at(q);
    if (value.is_interval() != schema_->attribute(a).numeric()) {
      throw Error("value kind does not match attribute '" + schema_->attribute(a).name + "'");
    }
    if (!value.contains(base_.values[a])) {
      throw Error("generalized value for '" + schema_->attribute(a).name +
                  "' does not cover the base record");
    }
    qids_[q] = std::move(value);
  }

  bool ungeneralized() const {
    return std::all_of(qids_.begin(), qids_.end(),
                       [](const GeneralizedValue& v) { return v.singleton(); });
  }

  // Stable content hash (schema excluded); used to derive per-instance seeds.
  std::uint64_t fingerprint() const {
    std::uint64_t h = mix64(static_cast<std::uint64_t>(base_.row_id));
    auto feed = [&h](double d) {
      std::uint64_t bits;
      std::memcpy(&bits, &d, sizeof bits);
      h = mix64(h ^ bits);
    };
    for (const GeneralizedValue& v : qids_) {
      if (v.is_interval()) {
        feed(v.interval().lo);
        feed(v.interval().hi);
      } else {
        feed(-1.0);
        for (double c : v.set()) feed(c);
      }
    }
    return h;
  }

  bool operator==(const GeneralizedInstance& o) const {
    return base_ == o.base_ && qids_ == o.qids_;
  }

 private:
  std::shared_ptr<const Schema> schema_;
  Record base_;
  std::vector<GeneralizedValue> qids_;
};

// True iff every quasi-identifier value of `values` lies in g.
inline bool covers(const GeneralizedInstance& g, std::span<const double> values) {
  const auto& qids = g.schema().quasi_identifiers();
  for (std::size_t q = 0; q < qids.size(); ++q) {
    if (!g.qid(q).contains(values[qids[q]])) return false;
  }
  return true;
}

inline bool covers(const GeneralizedInstance& g, const Record& r) {
  return covers(g, std::span<const double>(r.values));
}

// Number of rows in `data` that g can be linked to, regardless of label.
inline std::size_t k_degree(const GeneralizedInstance& g, const Dataset& data) {
  std::size_t n = 0;
  for (const Record& r : data.records()) n += covers(g, r);
  return n;
}

// Widens every quasi-identifier of g just enough to cover r.
inline GeneralizedInstance merge(const GeneralizedInstance& g, const Record& r) {
  GeneralizedInstance out = g;
  const auto& qids = g.schema().quasi_identifiers();
  for (std::size_t q = 0; q < qids.size(); ++q) {
    const double v = r.values.at(qids[q]);
    if (!g.qid(q).contains(v)) out.set(q, g.qid(q).widened(v));
  }
  return out;
}

// One-step neighbourhood used by local search. Per quasi-identifier:
//   numeric:     extend lo/hi to the adjacent distinct training value outside
//                the interval; shrink lo/hi to the adjacent distinct training
//                value inside it, never past the base value;
//   categorical: add one training label not in the set; remove one label
//                other than the base label.
inline std::vector<GeneralizedInstance> moves(const GeneralizedInstance& g,
                                              const Dataset& train) {
  std::vector<GeneralizedInstance> out;
  const Schema& schema = g.schema();
  const auto& qids = schema.quasi_identifiers();
  for (std::size_t q = 0; q < qids.size(); ++q) {
    const std::size_t a = qids[q];
    const double base = g.base().values[a];
    const auto& distinct = train.summary(a).distinct;
    const GeneralizedValue& cur = g.qid(q);
    auto emit = [&](GeneralizedValue v) {
      GeneralizedInstance m = g;
      m.set(q, std::move(v));
      out.push_back(std::move(m));
    };
    if (cur.is_interval()) {
      const Interval iv = cur.interval();
      auto below = std::lower_bound(distinct.begin(), distinct.end(), iv.lo);
      if (below != distinct.begin()) emit(Interval{*std::prev(below), iv.hi});
      auto above = std::upper_bound(distinct.begin(), distinct.end(), iv.hi);
      if (above != distinct.end()) emit(Interval{iv.lo, *above});
      if (iv.lo < iv.hi) {
        auto next_lo = std::upper_bound(distinct.begin(), distinct.end(), iv.lo);
        if (next_lo != distinct.end() && *next_lo <= base) emit(Interval{*next_lo, iv.hi});
        auto next_hi = std::lower_bound(distinct.begin(), distinct.end(), iv.hi);
        if (next_hi != distinct.begin() && *std::prev(next_hi) >= base) {
          emit(Interval{iv.lo, *std::prev(next_hi)});
        }
      }
    } else {
      const ValueSet& set = cur.set();
      for (double label : distinct) {
        if (std::binary_search(set.begin(), set.end(), label)) continue;
        ValueSet grown = set;
        grown.push_back(label);
        emit(GeneralizedValue(std::move(grown)));
      }
      if (set.size() > 1) {
        for (double label : set) {
          if (label == base) continue;
          ValueSet shrunk;
          for (double l : set) {
            if (l != label) shrunk.push_back(l);
          }
          emit(GeneralizedValue(std::move(shrunk)));
        }
      }
    }
  }
  return out;
}

// Numeric: "lo-hi", or the bare value for a singleton. Categorical: "{a|b}",
// or the bare label for a singleton.
inline std::string render(const Schema& schema, std::size_t attr, const GeneralizedValue& v) {
  if (v.is_interval()) {
    const Interval& i = v.interval();
    if (i.lo == i.hi) return csv::format_number(i.lo);
    return csv::format_number(i.lo) + "-" + csv::format_number(i.hi);
  }
  const ValueSet& s = v.set();
  if (s.size() == 1) return schema.label(attr, s.front());
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += "|";
    out += schema.label(attr, s[i]);
  }
  return out + "}";
}

// "(24-27, F, Antwerp)": the quasi-identifiers in schema order.
inline std::string render(const GeneralizedInstance& g) {
  std::string out = "(";
  const auto& qids = g.schema().quasi_identifiers();
  for (std::size_t q = 0; q < qids.size(); ++q) {
    if (q) out += ", ";
    out += render(g.schema(), qids[q], g.qid(q));
  }
  return out + ")";
}

}  // namespace cfk

#endif  // CFK_GENERALIZATION_HPP_
