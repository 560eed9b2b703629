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

#ifndef CFK_DATASET_HPP_
#define CFK_DATASET_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cfk/csv.hpp"
#include "cfk/error.hpp"
#include "cfk/rng.hpp"
#include "cfk/schema.hpp"

namespace cfk {

// One row. values[i] belongs to schema attribute i; categorical entries hold
// label codes. row_id is the 0-based data-row position in the source CSV.
struct Record {
  std::int64_t row_id = 0;
  std::vector<double> values;

  bool operator==(const Record&) const = default;
};

struct AttributeSummary {
  double min = 0.0;
  double max = 0.0;
  std::vector<double> distinct;  // sorted ascending

  double range() const { return max - min; }
  std::size_t distinct_count() const { return distinct.size(); }
};

class Dataset {
 public:
  Dataset(std::shared_ptr<const Schema> schema, std::vector<Record> records)
      : schema_(std::move(schema)), records_(std::move(records)) {
    if (records_.empty()) throw Error("empty dataset");
    summaries_.resize(schema_->size());
    for (std::size_t a = 0; a < schema_->size(); ++a) {
      std::vector<double> values;
      values.reserve(records_.size());
      for (const Record& r : records_) {
        if (r.values.size() != schema_->size()) {
          throw Error("record " + std::to_string(r.row_id) + " has " +
                      std::to_string(r.values.size()) + " values, schema has " +
                      std::to_string(schema_->size()));
        }
        values.push_back(r.values[a]);
      }
      std::sort(values.begin(), values.end());
      values.erase(std::unique(values.begin(), values.end()), values.end());
      AttributeSummary& s = summaries_[a];
      s.min = values.front();
      s.max = values.back();
      s.distinct = std::move(values);
    }
  }

  const Schema& schema() const { return *schema_; }
  const std::shared_ptr<const Schema>& schema_ptr() const { return schema_; }
  const std::vector<Record>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  const Record& operator[](std::size_t i) const { return records_[i]; }
  const AttributeSummary& summary(std::size_t attr) const {
    return summaries_.at(attr);
  }

  // Position of the record with the given row id, if present.
  std::optional<std::size_t> position_of(std::int64_t row_id) const {
    const auto it = std::lower_bound(
        records_.begin(), records_.end(), row_id,
        [](const Record& r, std::int64_t id) { return r.row_id < id; });
    if (it != records_.end() && it->row_id == row_id) {
      return static_cast<std::size_t>(it - records_.begin());
    }
    for (std::size_t i = 0; i < records_.size(); ++i) {  // unsorted input
      if (records_[i].row_id == row_id) return i;
    }
    return std::nullopt;
  }

  Dataset subset(std::span<const std::size_t> positions) const {
    std::vector<Record> rows;
    rows.reserve(positions.size());
    for (std::size_t p : positions) rows.push_back(records_.at(p));
    return Dataset(schema_, std::move(rows));
  }

 private:
  std::shared_ptr<const Schema> schema_;
  std::vector<Record> records_;
  std::vector<AttributeSummary> summaries_;
};

struct LoadStats {
  std::size_t rows_read = 0;
  std::size_t rows_skipped_missing = 0;
};

namespace detail {

inline bool is_missing(std::string_view token) {
  token = csv::trim(token);
  return token.empty() || token == "?" || token == "NA" || token == "NaN" ||
         token == "nan";
}

inline void sort_labels(std::vector<std::string>& labels) {
  const bool all_numeric = std::all_of(
      labels.begin(), labels.end(),
      [](const std::string& l) { return csv::parse_number(l).has_value(); });
  if (all_numeric) {
    std::sort(labels.begin(), labels.end(),
              [](const std::string& a, const std::string& b) {
                const double x = *csv::parse_number(a);
                const double y = *csv::parse_number(b);
                return x != y ? x < y : a < b;
              });
  } else {
    std::sort(labels.begin(), labels.end());
  }
}

}  // namespace detail

// Reads config.csv_path. Identifier columns are dropped (and may be absent
// from the file); rows with a missing token are skipped and counted.
inline Dataset load_dataset(const DatasetConfig& config, LoadStats* stats = nullptr) {
  config.validate();
  std::ifstream in(config.csv_path);
  if (!in) throw Error("cannot open dataset " + config.csv_path.string());

  std::string line;
  if (!csv::next_line(in, line, /*first=*/true)) {
    throw Error("empty dataset: " + config.csv_path.string() + " has no header");
  }
  std::vector<std::string> header = csv::split_line(line);
  for (auto& h : header) h = std::string(csv::trim(h));

  // column_of[i]: CSV column of stored attribute i.
  std::vector<Attribute> attributes;
  std::vector<std::optional<double>> weights;
  std::vector<std::size_t> column_of;
  for (const AttributeSpec& spec : config.attributes) {
    const auto it = std::find(header.begin(), header.end(), spec.name);
    if (spec.role == AttributeRole::kIdentifier) continue;
    if (it == header.end()) {
      throw Error("header/schema mismatch: column '" + spec.name +
                  "' missing from " + config.csv_path.string());
    }
    attributes.push_back(Attribute{spec.name, spec.kind, spec.role, {}});
    weights.push_back(spec.weight);
    column_of.push_back(static_cast<std::size_t>(it - header.begin()));
  }
  for (const std::string& h : header) {
    const bool known = std::any_of(config.attributes.begin(), config.attributes.end(),
                                   [&](const AttributeSpec& a) { return a.name == h; });
    if (!known) {
      throw Error("header/schema mismatch: column '" + h + "' is not in the schema");
    }
  }

  struct RawRow {
    std::int64_t row_id;
    std::vector<std::string> tokens;
  };
  std::vector<RawRow> raw;
  LoadStats local;
  std::int64_t data_row = 0;
  while (csv::next_line(in, line)) {
    ++data_row;
    ++local.rows_read;
    std::vector<std::string> fields = csv::split_line(line);
    if (fields.size() != header.size()) {
      throw Error("row " + std::to_string(data_row) + ": expected " +
                  std::to_string(header.size()) + " fields, found " +
                  std::to_string(fields.size()));
    }
    RawRow row{data_row - 1, {}};
    bool missing = false;
    for (std::size_t a = 0; a < attributes.size(); ++a) {
      std::string token(csv::trim(fields[column_of[a]]));
      if (detail::is_missing(token)) {
        missing = true;
        break;
      }
      if (attributes[a].numeric() && !csv::parse_number(token)) {
        throw Error("row " + std::to_string(data_row) + ": attribute '" +
                    attributes[a].name + "' has non-numeric value '" + token + "'");
      }
      row.tokens.push_back(std::move(token));
    }
    if (missing) {
      ++local.rows_skipped_missing;
      continue;
    }
    raw.push_back(std::move(row));
  }
  if (stats) *stats = local;
  if (raw.empty()) throw Error("empty dataset: " + config.csv_path.string());

  for (std::size_t a = 0; a < attributes.size(); ++a) {
    if (!attributes[a].categorical()) continue;
    std::vector<std::string> labels;
    for (const RawRow& r : raw) labels.push_back(r.tokens[a]);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    detail::sort_labels(labels);
    attributes[a].labels = std::move(labels);
  }
  auto schema = Schema::create(std::move(attributes), weights);

  std::vector<std::map<std::string, int, std::less<>>> codes(schema->size());
  for (std::size_t a = 0; a < schema->size(); ++a) {
    const auto& labels = schema->attribute(a).labels;
    for (std::size_t c = 0; c < labels.size(); ++c) codes[a][labels[c]] = static_cast<int>(c);
  }
  std::vector<Record> records;
  records.reserve(raw.size());
  for (const RawRow& r : raw) {
    Record rec{r.row_id, std::vector<double>(schema->size())};
    for (std::size_t a = 0; a < schema->size(); ++a) {
      rec.values[a] = schema->attribute(a).numeric()
                          ? *csv::parse_number(r.tokens[a])
                          : static_cast<double>(codes[a].find(r.tokens[a])->second);
    }
    records.push_back(std::move(rec));
  }
  return Dataset(std::move(schema), std::move(records));
}

// Writes stored attributes (identifiers are already gone) with a header row.
inline void write_csv(const Dataset& data, std::ostream& out) {
  const Schema& schema = data.schema();
  std::vector<std::string> fields;
  for (const Attribute& a : schema.attributes()) fields.push_back(a.name);
  csv::write_row(out, fields);
  for (const Record& r : data.records()) {
    fields.clear();
    for (std::size_t a = 0; a < schema.size(); ++a) {
      fields.push_back(schema.render(a, r.values[a]));
    }
    csv::write_row(out, fields);
  }
}

// Seeded random partition; |train| = round(fraction * n). Both halves keep
// the parent's row order.
inline std::pair<Dataset, Dataset> split(const Dataset& data, double fraction,
                                         std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw Error("split fraction must lie in (0,1), got " + std::to_string(fraction));
  }
  const std::size_t n = data.size();
  const auto n_train = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  if (n_train == 0 || n_train == n) {
    throw Error("split of " + std::to_string(n) + " rows at fraction " +
                std::to_string(fraction) + " leaves one side empty");
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Engine engine(derive_seed(seed, 0x5b117));
  shuffle(order, engine);
  std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {data.subset(train), data.subset(test)};
}

enum class Group { kMinority, kMajority };

inline std::string_view to_string(Group g) {
  return g == Group::kMinority ? "Minority" : "Majority";
}

// Minority iff the sensitive attribute equals config.minority_value. A value
// that never occurs in the data makes every row Majority.
inline Group group_of(const Record& record, const Schema& schema,
                      const DatasetConfig& config) {
  const auto attr = schema.find(config.sensitive_attribute);
  if (!attr) return Group::kMajority;
  const Attribute& a = schema.attribute(*attr);
  const double value = record.values.at(*attr);
  if (a.categorical()) {
    const auto code = a.code_of(config.minority_value);
    return code && static_cast<double>(*code) == value ? Group::kMinority
                                                       : Group::kMajority;
  }
  const auto minority = csv::parse_number(config.minority_value);
  return minority && *minority == value ? Group::kMinority : Group::kMajority;
}

}  // namespace cfk

#endif  // CFK_DATASET_HPP_
