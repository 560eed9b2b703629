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

#ifndef CFK_ATTACK_HPP_
#define CFK_ATTACK_HPP_

// Explanation linkage attack: an adversary who knows everyone's public
// quasi-identifiers matches a released counterfactual against them. A single
// match re-identifies the counterfactual instance and exposes its private
// attributes.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cfk/csv.hpp"
#include "cfk/dataset.hpp"
#include "cfk/error.hpp"
#include "cfk/generalization.hpp"

namespace cfk {

struct AttackResult {
  std::vector<std::size_t> matches;  // positions in the attacked dataset
  bool success = false;
  // (attribute, value) of the private attributes; filled only on success.
  std::vector<std::pair<std::string, std::string>> disclosed;

  std::size_t anonymity_set_size() const { return matches.size(); }
};

inline AttackResult linkage_attack(const GeneralizedInstance& explanation, const Dataset& population) {
  AttackResult result;
  for (std::size_t i = 0; i < population.size(); ++i) {
    if (covers(explanation, population[i])) result.matches.push_back(i);
  }
  if (result.matches.size() == 1) {
    result.success = true;
    const Schema& schema = population.schema();
    const Record& victim = population[result.matches.front()];
    for (std::size_t a : schema.private_attributes()) {
      result.disclosed.emplace_back(schema.attribute(a).name, schema.render(a, victim.values[a]));
    }
  }
  return result;
}

inline void print_attack(const AttackResult& result, const GeneralizedInstance& explanation,
                         std::ostream& out) {
  out << "explanation " << render(explanation) << " matches " << result.matches.size()
      << " row(s)\n";
  if (result.success) {
    out << "attack succeeded; disclosed private attributes:\n";
    for (const auto& [name, value] : result.disclosed) out << "  " << name << " = " << value << "\n";
  } else {
    out << "attack failed; anonymity set size " << result.anonymity_set_size() << "\n";
  }
}

// Parses the rendered form "(24-27, F, Antwerp)" (parentheses optional; sets
// as "{a|b}") into values parallel to Schema::quasi_identifiers().
inline std::vector<GeneralizedValue> parse_explanation_values(const Schema& schema,
                                                              std::string_view text) {
  text = csv::trim(text);
  if (!text.empty() && text.front() == '(') text.remove_prefix(1);
  if (!text.empty() && text.back() == ')') text.remove_suffix(1);
  std::vector<std::string> parts;
  {
    std::string cur;
    int depth = 0;
    for (char c : text) {
      if (c == '{') ++depth;
      if (c == '}') --depth;
      if (c == ',' && depth == 0) {
        parts.push_back(std::string(csv::trim(cur)));
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    parts.push_back(std::string(csv::trim(cur)));
  }
  const auto& qids = schema.quasi_identifiers();
  if (parts.size() != qids.size()) {
    throw Error("explanation lists " + std::to_string(parts.size()) + " values, schema has " +
                std::to_string(qids.size()) + " quasi-identifiers");
  }
  std::vector<GeneralizedValue> values;
  for (std::size_t q = 0; q < qids.size(); ++q) {
    const Attribute& a = schema.attribute(qids[q]);
    std::string_view p = parts[q];
    if (a.numeric()) {
      const std::size_t dash = p.find('-', 1);
      const auto lo = csv::parse_number(p.substr(0, dash));
      const auto hi = dash == std::string_view::npos ? lo : csv::parse_number(p.substr(dash + 1));
      if (!lo || !hi) throw Error("cannot parse interval '" + std::string(p) + "'");
      values.emplace_back(Interval{*lo, *hi});
    } else {
      if (!p.empty() && p.front() == '{') p.remove_prefix(1);
      if (!p.empty() && p.back() == '}') p.remove_suffix(1);
      ValueSet set;
      std::size_t start = 0;
      while (start <= p.size()) {
        const std::size_t bar = p.find('|', start);
        const std::string_view label =
            csv::trim(p.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start));
        set.push_back(schema.code(qids[q], label));
        if (bar == std::string_view::npos) break;
        start = bar + 1;
      }
      std::sort(set.begin(), set.end());
      set.erase(std::unique(set.begin(), set.end()), set.end());
      values.emplace_back(std::move(set));
    }
  }
  return values;
}

inline GeneralizedInstance parse_explanation(std::shared_ptr<const Schema> schema, Record base,
                                             std::string_view text) {
  std::vector<GeneralizedValue> values = parse_explanation_values(*schema, text);
  return GeneralizedInstance(std::move(schema), std::move(base), std::move(values));
}

// Linkage attack on a parsed explanation with no known counterfactual row.
// Returns the attack against the first matching row as base, or an empty
// result when nothing matches.
inline AttackResult linkage_attack(const Schema& schema, const std::vector<GeneralizedValue>& values,
                                   const Dataset& population,
                                   std::optional<GeneralizedInstance>* instance_out = nullptr) {
  const auto& qids = schema.quasi_identifiers();
  for (std::size_t i = 0; i < population.size(); ++i) {
    bool all = true;
    for (std::size_t q = 0; q < qids.size() && all; ++q) {
      all = values[q].contains(population[i].values[qids[q]]);
    }
    if (!all) continue;
    GeneralizedInstance g(population.schema_ptr(), population[i], values);
    AttackResult r = linkage_attack(g, population);
    if (instance_out) *instance_out = std::move(g);
    return r;
  }
  return {};
}

}  // namespace cfk

#endif  // CFK_ATTACK_HPP_
