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

#ifndef CFK_MONDRIAN_HPP_
#define CFK_MONDRIAN_HPP_

// Whole-dataset k-anonymization with relaxed multidimensional Mondrian, and
// the comparison explanation drawn from the anonymized data.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cfk/classifier.hpp"
#include "cfk/csv.hpp"
#include "cfk/dataset.hpp"
#include "cfk/error.hpp"
#include "cfk/generalization.hpp"
#include "cfk/neighbors.hpp"

namespace cfk {

// An equivalence class: member positions in the source dataset and the
// quasi-identifier cover of its members.
struct Partition {
  std::vector<std::size_t> members;
  std::vector<GeneralizedValue> summary;  // parallel to Schema::quasi_identifiers()
};

class AnonymizedDataset {
 public:
  AnonymizedDataset(Dataset source, std::size_t k, std::vector<Partition> partitions)
      : source_(std::move(source)), k_(k), partitions_(std::move(partitions)),
        partition_of_(source_.size(), 0) {
    for (std::size_t p = 0; p < partitions_.size(); ++p) {
      for (std::size_t m : partitions_[p].members) partition_of_.at(m) = p;
    }
  }

  const Dataset& source() const { return source_; }
  std::size_t k() const { return k_; }
  const std::vector<Partition>& partitions() const { return partitions_; }
  const Partition& partition_of(std::size_t position) const {
    return partitions_[partition_of_.at(position)];
  }

  // The source row at `position` with its quasi-identifiers replaced by its
  // partition's cover.
  GeneralizedInstance generalized(std::size_t position) const {
    return GeneralizedInstance(source_.schema_ptr(), source_[position],
                               partition_of(position).summary);
  }

 private:
  Dataset source_;
  std::size_t k_;
  std::vector<Partition> partitions_;
  std::vector<std::size_t> partition_of_;
};

namespace detail {

class MondrianPartitioner {
 public:
  MondrianPartitioner(const Dataset& data, std::size_t k) : data_(data), k_(k) {}

  std::vector<Partition> run() {
    std::vector<std::size_t> all(data_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    recurse(std::move(all));
    return std::move(out_);
  }

 private:
  double value(std::size_t row, std::size_t attr) const { return data_[row].values[attr]; }

  // Normalized spread of a quasi-identifier over `rows`; 0 when it cannot be
  // split (a single distinct value).
  double width(const std::vector<std::size_t>& rows, std::size_t attr) const {
    const Attribute& a = data_.schema().attribute(attr);
    const AttributeSummary& s = data_.summary(attr);
    std::vector<double> values;
    for (std::size_t r : rows) values.push_back(value(r, attr));
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    if (values.size() < 2) return 0.0;
    if (a.numeric()) return s.range() > 0 ? (values.back() - values.front()) / s.range() : 0.0;
    return static_cast<double>(values.size()) / static_cast<double>(s.distinct_count());
  }

  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> cut(
      std::vector<std::size_t> rows, std::size_t attr) const {
    std::vector<std::size_t> left, right;
    if (data_.schema().attribute(attr).numeric()) {
      // Relaxed median cut: rows tied at the median may land on either side.
      std::sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
        if (value(a, attr) != value(b, attr)) return value(a, attr) < value(b, attr);
        return data_[a].row_id < data_[b].row_id;
      });
      const std::size_t half = rows.size() / 2;
      left.assign(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(half));
      right.assign(rows.begin() + static_cast<std::ptrdiff_t>(half), rows.end());
    } else {
      std::vector<double> labels;
      for (std::size_t r : rows) labels.push_back(value(r, attr));
      std::sort(labels.begin(), labels.end());
      labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
      const double pivot = labels[(labels.size() + 1) / 2 - 1];
      for (std::size_t r : rows) (value(r, attr) <= pivot ? left : right).push_back(r);
    }
    return {std::move(left), std::move(right)};
  }

  void recurse(std::vector<std::size_t> rows) {
    const auto& qids = data_.schema().quasi_identifiers();
    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t q = 0; q < qids.size(); ++q) order.emplace_back(width(rows, qids[q]), q);
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& [w, q] : order) {
      if (w <= 0.0) break;
      auto [left, right] = cut(rows, qids[q]);
      if (left.size() >= k_ && right.size() >= k_) {
        recurse(std::move(left));
        recurse(std::move(right));
        return;
      }
    }
    emit(std::move(rows));
  }

  void emit(std::vector<std::size_t> rows) {
    std::sort(rows.begin(), rows.end());
    Partition p;
    for (std::size_t attr : data_.schema().quasi_identifiers()) {
      const Attribute& a = data_.schema().attribute(attr);
      GeneralizedValue v = GeneralizedValue::point(a, value(rows.front(), attr));
      for (std::size_t r : rows) v = v.widened(value(r, attr));
      p.summary.push_back(std::move(v));
    }
    p.members = std::move(rows);
    out_.push_back(std::move(p));
  }

  const Dataset& data_;
  std::size_t k_;
  std::vector<Partition> out_;
};

}  // namespace detail

// Top-down greedy partitioning: split on the quasi-identifier with the widest
// normalized range (numeric at the median, categorical by halving its sorted
// labels) while both halves keep at least k rows.
inline AnonymizedDataset mondrian(const Dataset& data, std::size_t k) {
  if (k == 0) throw Error("k must be at least 1");
  if (data.size() < k) {
    throw Error("cannot make " + std::to_string(data.size()) + " rows " + std::to_string(k) +
                "-anonymous");
  }
  auto partitions = detail::MondrianPartitioner(data, k).run();
  return AnonymizedDataset(data, k, std::move(partitions));
}

// Selects the nearest desired-outcome row of the anonymized source (original
// values, as nearest_unlike_neighbor does) and releases it with its
// partition's cover.
inline GeneralizedInstance baseline_explanation(const Record& factual,
                                                const AnonymizedDataset& anonymized,
                                                std::span<const int> source_predictions,
                                                const Classifier& model, int desired) {
  const CounterfactualResult nun = nearest_unlike_neighbor(
      factual, anonymized.source(), source_predictions, model, desired);
  const auto position = anonymized.source().position_of(nun.counterfactual.row_id);
  return anonymized.generalized(*position);
}

inline GeneralizedInstance baseline_explanation(const Record& factual,
                                                const AnonymizedDataset& anonymized,
                                                const Classifier& model, int desired) {
  const std::vector<int> predictions = predict_all(model, anonymized.source());
  return baseline_explanation(factual, anonymized, predictions, model, desired);
}

// CSV export: quasi-identifiers rendered as their partition cover, other
// attributes as stored.
inline void write_csv(const AnonymizedDataset& anonymized, std::ostream& out) {
  const Dataset& data = anonymized.source();
  const Schema& schema = data.schema();
  std::vector<std::string> fields;
  for (const Attribute& a : schema.attributes()) fields.push_back(a.name);
  csv::write_row(out, fields);
  const auto& qids = schema.quasi_identifiers();
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Partition& p = anonymized.partition_of(i);
    fields.clear();
    for (std::size_t a = 0; a < schema.size(); ++a) {
      const auto q = std::find(qids.begin(), qids.end(), a);
      fields.push_back(q == qids.end()
                           ? schema.render(a, data[i].values[a])
                           : render(schema, a, p.summary[static_cast<std::size_t>(q - qids.begin())]));
    }
    csv::write_row(out, fields);
  }
}

}  // namespace cfk

#endif  // CFK_MONDRIAN_HPP_
