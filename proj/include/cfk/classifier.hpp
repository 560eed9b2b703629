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

#ifndef CFK_CLASSIFIER_HPP_
#define CFK_CLASSIFIER_HPP_

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "cfk/dataset.hpp"
#include "cfk/error.hpp"

namespace cfk {

// The only model surface the anonymization code depends on. `values` is a
// full schema-width row; the target slot is ignored. Returns a target code.
// Implementations must be safe for concurrent calls.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual int predict(std::span<const double> values) const = 0;
};

inline std::vector<int> predict_all(const Classifier& model, const Dataset& data) {
  std::vector<int> out;
  out.reserve(data.size());
  for (const Record& r : data.records()) out.push_back(model.predict(r.values));
  return out;
}

// Exact lookup over predictor values with a fallback label. Used as a fixture
// model where specific predictions must be pinned.
class TableModel final : public Classifier {
 public:
  TableModel(std::shared_ptr<const Schema> schema, int fallback)
      : schema_(std::move(schema)), fallback_(fallback) {}

  void add(std::span<const double> values, int label) {
    table_[key(values)] = label;
  }

  int predict(std::span<const double> values) const override {
    const auto it = table_.find(key(values));
    return it == table_.end() ? fallback_ : it->second;
  }

 private:
  std::vector<double> key(std::span<const double> values) const {
    if (values.size() != schema_->size()) {
      throw Error("instance has " + std::to_string(values.size()) +
                  " values, schema has " + std::to_string(schema_->size()));
    }
    std::vector<double> k;
    for (std::size_t p : schema_->predictors()) k.push_back(values[p]);
    return k;
  }

  std::shared_ptr<const Schema> schema_;
  int fallback_;
  std::map<std::vector<double>, int> table_;
};

}  // namespace cfk

#endif  // CFK_CLASSIFIER_HPP_
