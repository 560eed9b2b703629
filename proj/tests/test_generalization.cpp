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

#include <gtest/gtest.h>

#include "support.hpp"

namespace cfk {
namespace {

using testing::toy;
using testing::toy_train;

GeneralizedInstance fiona_gina() { return merge(testing::point(toy_train(), toy("Fiona")), toy("Gina")); }

TEST(Merge, FionaAndGina) {
  const GeneralizedInstance g = fiona_gina();
  EXPECT_EQ(render(g), "(24-27, F, Antwerp)");
  EXPECT_TRUE(g.qid(0).is_interval());
  EXPECT_EQ(g.qid(0).interval().lo, 24);
  EXPECT_EQ(g.qid(0).interval().hi, 27);
  EXPECT_EQ(g.base().row_id, toy("Fiona").row_id);
  EXPECT_TRUE(covers(g, toy("Gina")));
  EXPECT_TRUE(covers(g, toy("Fiona")));
}

TEST(Merge, CoveredRowLeavesInstanceUnchanged) {
  const GeneralizedInstance g = fiona_gina();
  EXPECT_EQ(merge(g, toy("Fiona")), g);
  EXPECT_EQ(merge(g, toy("Ingrid")), g);
}

TEST(Merge, CategoricalSetsRenderWithBars) {
  const GeneralizedInstance g = merge(fiona_gina(), toy("Alfred"));
  EXPECT_EQ(render(g), "(24-27, {F|M}, {Antwerp|Brussels})");
}

TEST(Covers, ToyCases) {
  const GeneralizedInstance g = fiona_gina();
  EXPECT_TRUE(covers(g, toy("Ingrid")));
  EXPECT_FALSE(covers(g, toy("Alfred")));
  EXPECT_TRUE(covers(testing::point(toy_train(), toy("Fiona")), toy("Fiona")));
}

TEST(KDegree, ToyCases) {
  EXPECT_EQ(k_degree(fiona_gina(), toy_train()), 3u);
  EXPECT_EQ(k_degree(testing::point(toy_train(), toy("Fiona")), toy_train()), 1u);
  GeneralizedInstance all = testing::point(toy_train(), toy("Fiona"));
  for (const Record& r : toy_train().records()) all = merge(all, r);
  EXPECT_EQ(k_degree(all, toy_train()), 10u);
}

TEST(KDegree, MatchesBruteForceOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset d = testing::random_dataset(200, seed, 2, 2);
    Engine e(seed);
    for (int i = 0; i < 40; ++i) {
      const GeneralizedInstance g = testing::random_instance(d, e);
      ASSERT_EQ(k_degree(g, d), testing::oracle_k_degree(g, d));
      ASSERT_TRUE(covers(g, g.base()));
    }
  }
}

TEST(Merge, CoverageIsMonotone) {
  const Dataset d = testing::random_dataset(120, 31, 2, 2);
  Engine e(5);
  for (int i = 0; i < 200; ++i) {
    const GeneralizedInstance g = testing::random_instance(d, e);
    const Record& r = d[uniform_index(e, d.size())];
    const GeneralizedInstance m = merge(g, r);
    ASSERT_GE(k_degree(m, d), k_degree(g, d));
    ASSERT_TRUE(covers(m, r));
    ASSERT_TRUE(covers(m, g.base()));
  }
}

TEST(Moves, ToyNeighborhoodOfFigureInstance) {
  std::set<std::string> got;
  for (const GeneralizedInstance& m : moves(fiona_gina(), toy_train())) got.insert(render(m));
  const std::set<std::string> expected = {
      "(24-26, F, Antwerp)",           // shrink hi; lo cannot pass Fiona's 24
      "(23-27, F, Antwerp)",           // extend lo
      "(24-34, F, Antwerp)",           // extend hi
      "(24-27, {F|M}, Antwerp)",       // add gender
      "(24-27, F, {Antwerp|Brussels})"  // add city
  };
  EXPECT_EQ(got, expected);
}

TEST(Moves, SingletonOnlyWidens) {
  const auto ms = moves(testing::point(toy_train(), toy("Fiona")), toy_train());
  // Age 24: down to 23, up to 25; one extra gender; one extra city.
  EXPECT_EQ(ms.size(), 4u);
  for (const GeneralizedInstance& m : ms) {
    EXPECT_TRUE(covers(m, toy("Fiona")));
    EXPECT_GE(k_degree(m, toy_train()), 1u);
  }
}

TEST(Moves, SetsDropLabelsButNeverTheBase) {
  GeneralizedInstance g = merge(fiona_gina(), toy("Alfred"));
  for (const GeneralizedInstance& m : moves(g, toy_train())) {
    EXPECT_TRUE(covers(m, g.base())) << render(m);
  }
  std::set<std::string> got;
  for (const GeneralizedInstance& m : moves(g, toy_train())) got.insert(render(m));
  EXPECT_TRUE(got.count("(24-27, F, {Antwerp|Brussels})"));
  EXPECT_TRUE(got.count("(24-27, {F|M}, Antwerp)"));
  EXPECT_FALSE(got.count("(24-27, M, {Antwerp|Brussels})"));
}

TEST(Moves, AlwaysCoverBaseOnRandomInstances) {
  const Dataset d = testing::random_dataset(150, 8, 2, 2);
  Engine e(9);
  for (int i = 0; i < 100; ++i) {
    const GeneralizedInstance g = testing::random_instance(d, e);
    for (const GeneralizedInstance& m : moves(g, d)) ASSERT_TRUE(covers(m, g.base()));
  }
}

TEST(GeneralizedInstance, RejectsValuesThatDropTheBase) {
  const Record& fiona = toy("Fiona");
  std::vector<GeneralizedValue> values = fiona_gina().qid_values();
  values[0] = GeneralizedValue(Interval{25, 27});
  EXPECT_THROW(GeneralizedInstance(toy_train().schema_ptr(), fiona, values), Error);
  values[0] = GeneralizedValue(ValueSet{0});
  EXPECT_THROW(GeneralizedInstance(toy_train().schema_ptr(), fiona, values), Error);
}

TEST(Render, ParsesBack) {
  const GeneralizedInstance g = merge(fiona_gina(), toy("Alfred"));
  const GeneralizedInstance back = parse_explanation(toy_train().schema_ptr(), toy("Fiona"), render(g));
  EXPECT_EQ(back, g);
}

}  // namespace
}  // namespace cfk
