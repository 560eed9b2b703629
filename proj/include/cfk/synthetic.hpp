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

#ifndef CFK_SYNTHETIC_HPP_
#define CFK_SYNTHETIC_HPP_

// Seeded tabular generators used as desk-scale stand-ins for the public
// benchmark datasets. Each returns CSV text plus a matching schema config.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "cfk/csv.hpp"
#include "cfk/error.hpp"
#include "cfk/rng.hpp"
#include "json.hpp"

namespace cfk::synthetic {

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  nlohmann::json config;  // schema config without csv_path
};

namespace detail {

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  int integer(int lo, int hi) {
    return lo + static_cast<int>(uniform_index(engine_, static_cast<std::size_t>(hi - lo + 1)));
  }
  bool chance(double p) { return unit() < p; }
  double normal(double mean, double sd) {
    const double u1 = std::max(unit(), 1e-300);
    const double u2 = unit();
    return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  int clamp_round(double v, int lo, int hi) {
    return std::clamp(static_cast<int>(std::lround(v)), lo, hi);
  }
  template <typename T>
  const T& pick(const std::vector<T>& items, const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = unit() * total;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (u < weights[i]) return items[i];
      u -= weights[i];
    }
    return items.back();
  }

 private:
  Engine engine_;
};

inline nlohmann::json attribute(const std::string& name, const std::string& kind,
                                const std::string& role) {
  return {{"name", name}, {"kind", kind}, {"role", role}};
}

}  // namespace detail

// Contraceptive-method-choice surrogate: two numeric quasi-identifiers
// (WifeAge, ChildrenBorn) that drive a three-class target.
inline Table cmc_like(std::size_t n = 1500, std::uint64_t seed = 1) {
  detail::Draw d(derive_seed(seed, 0xc3c));
  Table t;
  t.name = "cmc_like";
  t.header = {"WifeAge", "WifeEducation", "HusbandEducation", "ChildrenBorn", "WifeReligion",
              "WifeWorking", "HusbandOccupation", "StandardOfLiving", "MediaExposure",
              "ContraceptiveMethod"};
  for (std::size_t i = 0; i < n; ++i) {
    const int age = d.integer(16, 49);
    const int children = d.clamp_round(d.normal(0.17 * (age - 16), 1.3), 0, 16);
    const int edu = d.pick<int>({1, 2, 3, 4}, {0.1, 0.22, 0.28, 0.4});
    const int husband_edu = std::clamp(edu + d.integer(-1, 1), 1, 4);
    const int religion = d.chance(0.85) ? 1 : 0;
    const int working = d.chance(0.75) ? 1 : 0;
    const int occupation = d.integer(1, 4);
    const int living = d.pick<int>({1, 2, 3, 4}, {0.09, 0.16, 0.3, 0.45});
    const int media = d.chance(0.93) ? 0 : 1;
    int method;
    if (children == 0) {
      method = 1;
    } else if (age >= 36) {
      method = (children >= 4 || edu >= 3) ? 2 : 1;
    } else {
      method = (edu >= 3 || children >= 3) ? 3 : 1;
    }
    if (d.chance(0.06)) method = d.integer(1, 3);
    t.rows.push_back({std::to_string(age), std::to_string(edu), std::to_string(husband_edu),
                      std::to_string(children), std::to_string(religion), std::to_string(working),
                      std::to_string(occupation), std::to_string(living), std::to_string(media),
                      std::to_string(method)});
  }
  using detail::attribute;
  t.config = {
      {"attributes",
       {attribute("WifeAge", "numeric", "quasi"), attribute("WifeEducation", "categorical", "private"),
        attribute("HusbandEducation", "categorical", "private"),
        attribute("ChildrenBorn", "numeric", "quasi"),
        attribute("WifeReligion", "categorical", "private"),
        attribute("WifeWorking", "categorical", "private"),
        attribute("HusbandOccupation", "categorical", "private"),
        attribute("StandardOfLiving", "categorical", "private"),
        attribute("MediaExposure", "categorical", "private"),
        attribute("ContraceptiveMethod", "categorical", "target")}},
      {"sensitive_attribute", "WifeReligion"},
      {"minority_value", "0"},
      {"desired_outcome", "2"},
      {"split_fraction", 0.6},
      {"split_seed", 11}};
  return t;
}

// Heart-disease surrogate: quasi-identifiers Age and Sex carry little signal.
inline Table heart_like(std::size_t n = 303, std::uint64_t seed = 1) {
  detail::Draw d(derive_seed(seed, 0x4ea27));
  Table t;
  t.name = "heart_like";
  t.header = {"Age", "Sex", "ChestPain", "RestingBP", "Cholesterol", "MaxHeartRate",
              "ExerciseAngina", "Oldpeak", "Vessels", "Thal", "Disease"};
  for (std::size_t i = 0; i < n; ++i) {
    const int age = d.clamp_round(d.normal(54, 9), 29, 77);
    const int sex = d.chance(0.68) ? 1 : 0;
    const int cp = d.pick<int>({1, 2, 3, 4}, {0.08, 0.17, 0.28, 0.47});
    const int bp = d.clamp_round(d.normal(131, 17), 94, 200);
    const int chol = d.clamp_round(d.normal(246, 50), 126, 564);
    const int hr = d.clamp_round(d.normal(150, 22), 71, 202);
    const int angina = d.chance(0.33) ? 1 : 0;
    const double oldpeak = std::round(std::clamp(d.normal(1.0, 1.1), 0.0, 6.2) * 10.0) / 10.0;
    const int vessels = d.pick<int>({0, 1, 2, 3}, {0.58, 0.22, 0.13, 0.07});
    const int thal = d.pick<int>({3, 6, 7}, {0.55, 0.06, 0.39});
    const double risk = 1.1 * (cp == 4) + 0.9 * angina + 0.6 * oldpeak + 0.8 * vessels +
                        1.0 * (thal == 7) - 0.025 * (hr - 150);
    int disease = risk > 2.0 ? 1 : 0;
    if (d.chance(0.05)) disease = 1 - disease;
    t.rows.push_back({std::to_string(age), std::to_string(sex), std::to_string(cp),
                      std::to_string(bp), std::to_string(chol), std::to_string(hr),
                      std::to_string(angina), csv::format_number(oldpeak), std::to_string(vessels),
                      std::to_string(thal), std::to_string(disease)});
  }
  using detail::attribute;
  t.config = {{"attributes",
               {attribute("Age", "numeric", "quasi"), attribute("Sex", "categorical", "quasi"),
                attribute("ChestPain", "categorical", "private"),
                attribute("RestingBP", "numeric", "private"),
                attribute("Cholesterol", "numeric", "private"),
                attribute("MaxHeartRate", "numeric", "private"),
                attribute("ExerciseAngina", "categorical", "private"),
                attribute("Oldpeak", "numeric", "private"),
                attribute("Vessels", "numeric", "private"),
                attribute("Thal", "categorical", "private"),
                attribute("Disease", "categorical", "target")}},
              {"sensitive_attribute", "Sex"},
              {"minority_value", "0"},
              {"desired_outcome", "0"},
              {"split_fraction", 0.6},
              {"split_seed", 5}};
  return t;
}

// Credit-style data with a minority group (Group = B) whose quasi-identifier
// combinations are spread thin: uniform ages and regions, against a majority
// concentrated in three regions and a narrow age band. The label depends on
// private financial attributes only.
inline Table fairness(std::size_t n = 1500, std::uint64_t seed = 1, double minority_share = 0.1) {
  detail::Draw d(derive_seed(seed, 0xfa1e));
  Table t;
  t.name = "fairness";
  t.header = {"Age", "Group", "Region", "Income", "Debt", "YearsEmployed", "Decision"};
  const std::vector<std::string> regions = {"R1", "R2", "R3", "R4", "R5", "R6", "R7", "R8"};
  const std::vector<double> majority_w = {0.3, 0.3, 0.3, 0.02, 0.02, 0.02, 0.02, 0.02};
  const std::vector<double> minority_w(regions.size(), 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const bool minority = d.chance(minority_share);
    const int age = minority ? d.integer(18, 80) : d.clamp_round(d.normal(42, 7), 18, 80);
    const std::string& region = d.pick(regions, minority ? minority_w : majority_w);
    const int income = d.clamp_round(d.normal(50, 15), 5, 150);
    const int debt = d.clamp_round(d.normal(20, 8), 0, 80);
    const int years = d.integer(0, 30);
    const double score = income - 1.2 * debt + 0.5 * years + d.normal(0, 3);
    t.rows.push_back({std::to_string(age), minority ? "B" : "A", region, std::to_string(income),
                      std::to_string(debt), std::to_string(years),
                      score > 32 ? "Approve" : "Deny"});
  }
  using detail::attribute;
  t.config = {{"attributes",
               {attribute("Age", "numeric", "quasi"), attribute("Group", "categorical", "quasi"),
                attribute("Region", "categorical", "quasi"),
                attribute("Income", "numeric", "private"),
                attribute("Debt", "numeric", "private"),
                attribute("YearsEmployed", "numeric", "private"),
                attribute("Decision", "categorical", "target")}},
              {"sensitive_attribute", "Group"},
              {"minority_value", "B"},
              {"desired_outcome", "Approve"},
              {"split_fraction", 0.6},
              {"split_seed", 3}};
  return t;
}

inline Table by_name(const std::string& kind, std::size_t n, std::uint64_t seed) {
  if (kind == "cmc") return cmc_like(n, seed);
  if (kind == "heart") return heart_like(n, seed);
  if (kind == "fairness") return fairness(n, seed);
  throw Error("unknown synthetic dataset '" + kind + "' (expected cmc, heart or fairness)");
}

// Writes <dir>/<name>.csv and <dir>/<name>.json; returns the config path.
inline std::filesystem::path write(const Table& t, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto csv_path = dir / (t.name + ".csv");
  {
    std::ofstream out(csv_path);
    if (!out) throw Error("cannot write " + csv_path.string());
    csv::write_row(out, t.header);
    for (const auto& row : t.rows) csv::write_row(out, row);
  }
  nlohmann::json config = t.config;
  config["csv_path"] = t.name + ".csv";
  const auto config_path = dir / (t.name + ".json");
  std::ofstream out(config_path);
  if (!out) throw Error("cannot write " + config_path.string());
  out << config.dump(2) << "\n";
  return config_path;
}

}  // namespace cfk::synthetic

#endif  // CFK_SYNTHETIC_HPP_
