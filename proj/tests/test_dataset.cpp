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

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "support.hpp"

namespace cfk {
namespace {

namespace fs = std::filesystem;
using testing::toy;
using testing::toy_train;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "cfk_dataset_tests";
  fs::create_directories(dir);
  return dir / name;
}

DatasetConfig toy_config_with_csv(const std::string& csv_text, const std::string& name) {
  DatasetConfig c = load_dataset_config(testing::toy_config_path());
  c.csv_path = scratch(name);
  std::ofstream(c.csv_path) << csv_text;
  return c;
}

TEST(Schema, RejectsBadRoleLayouts) {
  using K = AttributeKind;
  using R = AttributeRole;
  EXPECT_THROW(Schema::create({{"a", K::kNumeric, R::kQuasiIdentifier, {}}}), Error);
  EXPECT_THROW(Schema::create({{"y", K::kCategorical, R::kTarget, {"0", "1"}},
                               {"p", K::kNumeric, R::kPrivate, {}}}),
               Error);
  EXPECT_THROW(Schema::create({{"a", K::kNumeric, R::kQuasiIdentifier, {}},
                               {"y", K::kNumeric, R::kTarget, {}}}),
               Error);
  EXPECT_THROW(Schema::create({{"a", K::kNumeric, R::kQuasiIdentifier, {}},
                               {"a", K::kNumeric, R::kPrivate, {}},
                               {"y", K::kCategorical, R::kTarget, {"0"}}}),
               Error);
}

TEST(Schema, QuasiIdentifierWeightsDefaultToEqualAndMustSumToOne) {
  using K = AttributeKind;
  using R = AttributeRole;
  const std::vector<Attribute> attrs = {{"a", K::kNumeric, R::kQuasiIdentifier, {}},
                                        {"b", K::kNumeric, R::kQuasiIdentifier, {}},
                                        {"y", K::kCategorical, R::kTarget, {"0", "1"}}};
  const auto equal = Schema::create(attrs);
  EXPECT_DOUBLE_EQ(equal->qid_weights()[0], 0.5);
  EXPECT_DOUBLE_EQ(equal->qid_weights()[1], 0.5);
  const auto weighted = Schema::create(attrs, {0.25, 0.75, std::nullopt});
  EXPECT_DOUBLE_EQ(weighted->qid_weights()[1], 0.75);
  EXPECT_THROW(Schema::create(attrs, {0.25, 0.5, std::nullopt}), Error);
  EXPECT_THROW(Schema::create(attrs, {0.25, std::nullopt, std::nullopt}), Error);
  EXPECT_THROW(Schema::create(attrs, {1.5, -0.5, std::nullopt}), Error);
}

TEST(LoadDataset, ToyTrainingSet) {
  const Dataset& d = toy_train();
  EXPECT_EQ(d.size(), 10u);
  EXPECT_EQ(d.schema().size(), 6u);  // Name dropped
  EXPECT_FALSE(d.schema().find("Name").has_value());
  const std::size_t age = *d.schema().find("Age");
  EXPECT_EQ(d.summary(age).min, 23);
  EXPECT_EQ(d.summary(age).max, 70);
  const std::size_t city = *d.schema().find("City");
  EXPECT_EQ(d.summary(city).distinct_count(), 2u);
  EXPECT_EQ(d.schema().quasi_identifiers().size(), 3u);
  EXPECT_EQ(d.schema().private_attributes().size(), 2u);
}

TEST(LoadDataset, HeaderOrderDoesNotMatter) {
  const DatasetConfig c = toy_config_with_csv(
      "Credit,City,Gender,Age,Salary,Relationship,Name\n"
      "Accept,Antwerp,F,24,60000,Single,Fiona\n"
      "Reject,Brussels,M,25,50000,Single,Alfred\n",
      "reordered.csv");
  const Dataset d = load_dataset(c);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.schema().attribute(0).name, "Age");
  EXPECT_EQ(d[0].values[0], 24);
  EXPECT_EQ(d.schema().render(*d.schema().find("City"), d[1].values[2]), "Brussels");
}

TEST(LoadDataset, EmptyDataIsAnError) {
  const DatasetConfig c =
      toy_config_with_csv("Name,Age,Gender,City,Salary,Relationship,Credit\n", "empty.csv");
  try {
    load_dataset(c);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("empty dataset"), std::string::npos) << e.what();
  }
}

TEST(LoadDataset, NonNumericTokenNamesRowAndAttribute) {
  const DatasetConfig c = toy_config_with_csv(
      "Name,Age,Gender,City,Salary,Relationship,Credit\n"
      "A,25,M,Brussels,50000,Single,Reject\n"
      "B,23,M,Antwerp,40000,Separated,Reject\n"
      "C,34,M,Brussels,30000,Cohabiting,Reject\n"
      "D,47,M,Antwerp,abc,Married,Accept\n",
      "bad.csv");
  try {
    load_dataset(c);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 4"), std::string::npos) << msg;
    EXPECT_NE(msg.find("Salary"), std::string::npos) << msg;
  }
}

TEST(LoadDataset, MissingFileAndHeaderMismatch) {
  DatasetConfig c = load_dataset_config(testing::toy_config_path());
  c.csv_path = scratch("does_not_exist.csv");
  std::filesystem::remove(c.csv_path);
  EXPECT_THROW(load_dataset(c), Error);
  const DatasetConfig wrong =
      toy_config_with_csv("Name,Age,Gender,Town,Salary,Relationship,Credit\nx,1,F,A,1,S,Accept\n",
                          "wrong_header.csv");
  EXPECT_THROW(load_dataset(wrong), Error);
}

TEST(LoadDataset, RowsWithMissingValuesAreSkippedAndCounted) {
  const DatasetConfig c = toy_config_with_csv(
      "Name,Age,Gender,City,Salary,Relationship,Credit\n"
      "A,25,M,Brussels,50000,Single,Reject\n"
      "B,?,M,Antwerp,40000,Separated,Reject\n"
      "C,34,M,,30000,Cohabiting,Reject\n",
      "missing.csv");
  LoadStats stats;
  const Dataset d = load_dataset(c, &stats);
  EXPECT_EQ(d.size(), 1u);
  EXPECT_EQ(stats.rows_read, 3u);
  EXPECT_EQ(stats.rows_skipped_missing, 2u);
}

TEST(LoadDataset, CsvRoundTripKeepsValues) {
  const Dataset& d = testing::toy_all();
  const fs::path path = scratch("roundtrip.csv");
  {
    std::ofstream out(path);
    write_csv(d, out);
  }
  DatasetConfig c = load_dataset_config(testing::toy_config_path());
  c.csv_path = path;
  const Dataset back = load_dataset(c);
  ASSERT_EQ(back.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(back[i].values, d[i].values);
}

TEST(LoadDataset, SummariesMatchRecords) {
  const Dataset d = testing::random_dataset(300, 4, 2, 2);
  for (std::size_t a = 0; a < d.schema().size(); ++a) {
    std::set<double> distinct;
    double lo = 1e300, hi = -1e300;
    for (const Record& r : d.records()) {
      distinct.insert(r.values[a]);
      lo = std::min(lo, r.values[a]);
      hi = std::max(hi, r.values[a]);
    }
    EXPECT_EQ(d.summary(a).min, lo);
    EXPECT_EQ(d.summary(a).max, hi);
    EXPECT_EQ(std::vector<double>(distinct.begin(), distinct.end()), d.summary(a).distinct);
  }
}

TEST(Split, ToySixFour) {
  const auto [train, test] = split(toy_train(), 0.6, 7);
  EXPECT_EQ(train.size(), 6u);
  EXPECT_EQ(test.size(), 4u);
  std::set<std::int64_t> ids;
  for (const Record& r : train.records()) ids.insert(r.row_id);
  for (const Record& r : test.records()) EXPECT_EQ(ids.count(r.row_id), 0u);
}

TEST(Split, DeterministicAndExhaustiveForManySeeds) {
  const Dataset d = testing::random_dataset(97, 1, 1, 1);
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto [a1, b1] = split(d, 0.6, seed);
    const auto [a2, b2] = split(d, 0.6, seed);
    EXPECT_EQ(a1.records(), a2.records());
    EXPECT_EQ(b1.records(), b2.records());
    EXPECT_EQ(a1.size(), 58u);  // round(0.6 * 97)
    std::set<std::int64_t> ids;
    for (const Record& r : a1.records()) ids.insert(r.row_id);
    for (const Record& r : b1.records()) EXPECT_TRUE(ids.insert(r.row_id).second);
    EXPECT_EQ(ids.size(), d.size());
  }
}

TEST(Split, FractionOutOfRange) {
  EXPECT_THROW(split(toy_train(), 1.0, 7), Error);
  EXPECT_THROW(split(toy_train(), 0.0, 7), Error);
  EXPECT_THROW(split(toy_train(), -0.2, 7), Error);
}

TEST(GroupOf, SensitiveAttributeMembership) {
  DatasetConfig c = load_dataset_config(testing::toy_config_path());
  const Schema& s = toy_train().schema();
  EXPECT_EQ(group_of(toy("Fiona"), s, c), Group::kMinority);
  EXPECT_EQ(group_of(toy("Alfred"), s, c), Group::kMajority);
  c.minority_value = "X";
  for (const Record& r : toy_train().records()) EXPECT_EQ(group_of(r, s, c), Group::kMajority);
}

TEST(Csv, SplitsQuotedFields) {
  EXPECT_EQ(csv::split_line(R"(a,"b,c",d)"), (std::vector<std::string>{"a", "b,c", "d"}));
  EXPECT_EQ(csv::split_line(R"("say ""hi""",2)"), (std::vector<std::string>{"say \"hi\"", "2"}));
  EXPECT_EQ(csv::format_number(100000), "100000");
  EXPECT_EQ(csv::format_number(0.1), "0.1");
  EXPECT_FALSE(csv::parse_number("12x").has_value());
  std::ostringstream out;
  csv::write_row(out, {"a,b", "c"});
  EXPECT_EQ(out.str(), "\"a,b\",c\n");
}

}  // namespace
}  // namespace cfk
