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

#ifndef CFK_SCHEMA_HPP_
#define CFK_SCHEMA_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cfk/csv.hpp"
#include "cfk/error.hpp"
#include "json.hpp"

namespace cfk {

enum class AttributeKind { kNumeric, kCategorical };
enum class AttributeRole { kIdentifier, kQuasiIdentifier, kPrivate, kTarget };

inline std::string_view to_string(AttributeKind kind) {
  return kind == AttributeKind::kNumeric ? "numeric" : "categorical";
}

inline std::string_view to_string(AttributeRole role) {
  switch (role) {
    case AttributeRole::kIdentifier: return "identifier";
    case AttributeRole::kQuasiIdentifier: return "quasi";
    case AttributeRole::kPrivate: return "private";
    case AttributeRole::kTarget: return "target";
  }
  return "?";
}

inline AttributeKind parse_kind(std::string_view s) {
  if (s == "numeric") return AttributeKind::kNumeric;
  if (s == "categorical") return AttributeKind::kCategorical;
  throw Error("unknown attribute kind '" + std::string(s) + "'");
}

inline AttributeRole parse_role(std::string_view s) {
  if (s == "identifier") return AttributeRole::kIdentifier;
  if (s == "quasi") return AttributeRole::kQuasiIdentifier;
  if (s == "private") return AttributeRole::kPrivate;
  if (s == "target") return AttributeRole::kTarget;
  throw Error("unknown attribute role '" + std::string(s) + "'");
}

// One column as declared in the schema config.
struct AttributeSpec {
  std::string name;
  AttributeKind kind = AttributeKind::kNumeric;
  AttributeRole role = AttributeRole::kPrivate;
  std::optional<double> weight;  // NCP weight; quasi-identifiers only
};

// A stored (non-identifier) attribute. Categorical values are kept as codes
// into `labels`; labels are sorted (numerically when every label is a
// number), so code order equals label order.
struct Attribute {
  std::string name;
  AttributeKind kind = AttributeKind::kNumeric;
  AttributeRole role = AttributeRole::kPrivate;
  std::vector<std::string> labels;

  bool numeric() const { return kind == AttributeKind::kNumeric; }
  bool categorical() const { return kind == AttributeKind::kCategorical; }

  std::optional<int> code_of(std::string_view label) const {
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) return std::nullopt;
    return static_cast<int>(it - labels.begin());
  }
};

// Immutable column layout shared by a dataset and everything derived from
// it. Attribute indices are positions in Record::values.
class Schema {
 public:
  // Validates role and weight invariants. `weights` holds one optional entry
  // per attribute; either every quasi-identifier has one or none does.
  static std::shared_ptr<const Schema> create(
      std::vector<Attribute> attributes,
      const std::vector<std::optional<double>>& weights = {}) {
    auto schema = std::shared_ptr<Schema>(new Schema());
    schema->attributes_ = std::move(attributes);
    std::size_t targets = 0;
    for (std::size_t i = 0; i < schema->attributes_.size(); ++i) {
      const Attribute& a = schema->attributes_[i];
      if (a.role == AttributeRole::kIdentifier) {
        throw Error("identifier attribute '" + a.name +
                    "' cannot be stored in a schema");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (schema->attributes_[j].name == a.name) {
          throw Error("duplicate attribute '" + a.name + "'");
        }
      }
      if (a.role == AttributeRole::kTarget) {
        if (!a.categorical()) {
          throw Error("target attribute '" + a.name + "' must be categorical");
        }
        schema->target_ = i;
        ++targets;
      } else {
        schema->predictors_.push_back(i);
      }
      if (a.role == AttributeRole::kQuasiIdentifier) schema->qids_.push_back(i);
      if (a.role == AttributeRole::kPrivate) schema->private_.push_back(i);
    }
    if (targets != 1) {
      throw Error("schema needs exactly one target attribute, found " +
                  std::to_string(targets));
    }
    if (schema->qids_.empty()) {
      throw Error("schema needs at least one quasi-identifier");
    }

    std::size_t given = 0;
    double total = 0.0;
    for (std::size_t q : schema->qids_) {
      if (q < weights.size() && weights[q]) {
        if (*weights[q] < 0.0 || *weights[q] > 1.0) {
          throw Error("weight of '" + schema->attributes_[q].name +
                      "' is outside [0,1]");
        }
        ++given;
        total += *weights[q];
      }
    }
    const std::size_t d = schema->qids_.size();
    if (given == 0) {
      schema->qid_weights_.assign(d, 1.0 / static_cast<double>(d));
    } else if (given != d) {
      throw Error("either every quasi-identifier has a weight or none does");
    } else if (std::abs(total - 1.0) > 1e-9) {
      throw Error("quasi-identifier weights sum to " + std::to_string(total) +
                  ", expected 1");
    } else {
      for (std::size_t q : schema->qids_) schema->qid_weights_.push_back(*weights[q]);
    }
    return schema;
  }

  std::size_t size() const { return attributes_.size(); }
  const Attribute& attribute(std::size_t i) const { return attributes_.at(i); }
  const std::vector<Attribute>& attributes() const { return attributes_; }

  std::optional<std::size_t> find(std::string_view name) const {
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
      if (attributes_[i].name == name) return i;
    }
    return std::nullopt;
  }

  std::size_t index_of(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw Error("unknown attribute '" + std::string(name) + "'");
  }

  std::size_t target() const { return target_; }
  // Every stored attribute except the target, in schema order.
  const std::vector<std::size_t>& predictors() const { return predictors_; }
  const std::vector<std::size_t>& quasi_identifiers() const { return qids_; }
  const std::vector<std::size_t>& private_attributes() const { return private_; }
  // Parallel to quasi_identifiers(); sums to 1.
  const std::vector<double>& qid_weights() const { return qid_weights_; }

  const std::string& label(std::size_t attr, double code) const {
    const auto& labels = attributes_.at(attr).labels;
    const auto c = static_cast<std::size_t>(code);
    if (code < 0 || c >= labels.size()) {
      throw Error("code " + std::to_string(code) + " out of range for '" +
                  attributes_.at(attr).name + "'");
    }
    return labels[c];
  }

  int code(std::size_t attr, std::string_view label) const {
    if (auto c = attributes_.at(attr).code_of(label)) return *c;
    throw Error("unknown value '" + std::string(label) + "' for attribute '" +
                attributes_.at(attr).name + "'");
  }

  // Renders a stored value in its native form (numbers shortest-exact).
  std::string render(std::size_t attr, double value) const {
    if (attributes_.at(attr).numeric()) return csv::format_number(value);
    return label(attr, value);
  }

 private:
  Schema() = default;

  std::vector<Attribute> attributes_;
  std::size_t target_ = 0;
  std::vector<std::size_t> predictors_;
  std::vector<std::size_t> qids_;
  std::vector<std::size_t> private_;
  std::vector<double> qid_weights_;
};

// Dataset-level configuration, read from the JSON schema config.
struct DatasetConfig {
  std::filesystem::path csv_path;
  std::vector<AttributeSpec> attributes;
  std::string sensitive_attribute;
  std::string minority_value;
  std::string desired_outcome;
  double split_fraction = 0.6;
  std::uint64_t split_seed = 0;

  void validate() const {
    if (!(split_fraction > 0.0 && split_fraction < 1.0)) {
      throw Error("split_fraction must lie in (0,1), got " +
                  std::to_string(split_fraction));
    }
    const auto named = [&](std::string_view n) {
      return std::any_of(attributes.begin(), attributes.end(),
                         [&](const AttributeSpec& a) { return a.name == n; });
    };
    if (!sensitive_attribute.empty() && !named(sensitive_attribute)) {
      throw Error("sensitive_attribute '" + sensitive_attribute +
                  "' is not in the schema");
    }
  }
};

inline DatasetConfig dataset_config_from_json(const nlohmann::json& j,
                                              const std::filesystem::path& base_dir = {}) {
  DatasetConfig config;
  try {
    std::filesystem::path csv = j.at("csv_path").get<std::string>();
    config.csv_path = csv.is_absolute() || base_dir.empty() ? csv : base_dir / csv;
    for (const auto& a : j.at("attributes")) {
      AttributeSpec spec;
      spec.name = a.at("name").get<std::string>();
      spec.kind = parse_kind(a.at("kind").get<std::string>());
      spec.role = parse_role(a.at("role").get<std::string>());
      if (a.contains("weight")) spec.weight = a.at("weight").get<double>();
      config.attributes.push_back(std::move(spec));
    }
    config.sensitive_attribute = j.value("sensitive_attribute", std::string());
    config.minority_value = j.value("minority_value", std::string());
    config.desired_outcome = j.value("desired_outcome", std::string());
    config.split_fraction = j.value("split_fraction", 0.6);
    config.split_seed = j.value("split_seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed schema config: ") + e.what());
  }
  config.validate();
  return config;
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error("cannot parse " + path.string() + ": " + e.what());
  }
}

// Relative csv_path entries resolve against the config file's directory.
inline DatasetConfig load_dataset_config(const std::filesystem::path& path) {
  return dataset_config_from_json(read_json_file(path), path.parent_path());
}

}  // namespace cfk

#endif  // CFK_SCHEMA_HPP_
