// Copyright 2026 The dpsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpsynth/linkage.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "dpsynth/csv.hpp"
#include "dpsynth/error.hpp"

#include <nlohmann/json.hpp>

namespace dpsynth {
namespace {

TEST(LinearSimilarity, KnownValuesToThreeDecimals) {
  EXPECT_NEAR(linear_similarity(7.0, 7.4, 0.5, 1.5), 1.000, 5e-4);
  EXPECT_NEAR(linear_similarity(7.0, 8.0, 0.5, 1.5), 0.667, 5e-4);
  EXPECT_NEAR(linear_similarity(7.0, 9.0, 0.5, 1.5), 0.000, 5e-4);
  // Exactly at the offset boundary: still 1.
  EXPECT_DOUBLE_EQ(linear_similarity(3.0, 3.5, 0.5, 1.5), 1.0);
  // Symmetric in its arguments.
  EXPECT_DOUBLE_EQ(linear_similarity(8.0, 7.0, 0.5, 1.5),
                   linear_similarity(7.0, 8.0, 0.5, 1.5));
  // Far beyond the ramp clamps at zero, never negative.
  EXPECT_DOUBLE_EQ(linear_similarity(0.0, 100.0, 0.5, 1.5), 0.0);
}

LinkageConfig demo_config() {
  LinkageConfig cfg;
  cfg.exact_cols = {"week", "gender"};
  cfg.numeric_col = "sleep";
  cfg.offset = 0.5;
  cfg.scale = 1.5;
  cfg.sim_threshold = 0.8;
  return cfg;
}

TEST(LinkageAttack, FindsPlantedMatchesExactly) {
  // Four synthetic rows deliberately shadow four target rows: same block
  // keys, sleep within the offset. Everything else misses either the block
  // or the threshold.
  const RawTable target = parse_csv(
      "week,gender,sleep\n"
      "1,f,7.0\n"
      "1,m,6.0\n"
      "2,f,8.0\n"
      "2,m,5.5\n"
      "3,f,7.5\n");
  const RawTable aux = parse_csv(
      "week,gender,sleep\n"
      "1,f,7.2\n"   // planted match for target 0
      "1,m,6.4\n"   // planted match for target 1
      "2,f,7.9\n"   // planted match for target 2
      "2,m,5.2\n"   // planted match for target 3
      "3,f,9.9\n"   // blocked in, but similarity 0.27 < 0.8
      "3,m,7.5\n");  // block key misses every target row
  const MatchResult res = linkage_attack(target, aux, demo_config());
  ASSERT_EQ(res.pairs.size(), 4u);
  for (const auto& p : res.pairs) {
    EXPECT_EQ(p.target_row, p.aux_row);  // planted 1:1 shadowing
    EXPECT_DOUBLE_EQ(p.similarity, 1.0);
  }
  EXPECT_EQ(res.pairs_blocked, 5u);  // the 4 matches plus the weak row 4
}

TEST(LinkageAttack, SortsBySimilarityThenPosition) {
  const RawTable target = parse_csv(
      "week,gender,sleep\n"
      "1,f,7.0\n"
      "1,f,7.0\n");
  const RawTable aux = parse_csv(
      "week,gender,sleep\n"
      "1,f,8.0\n"   // similarity 2/3
      "1,f,7.1\n");  // similarity 1
  LinkageConfig cfg = demo_config();
  cfg.sim_threshold = 0.5;
  const MatchResult res = linkage_attack(target, aux, cfg);
  ASSERT_EQ(res.pairs.size(), 4u);
  // Both target rows match aux 1 at similarity 1.0 first, ties by target.
  EXPECT_EQ(res.pairs[0].target_row, 0u);
  EXPECT_EQ(res.pairs[0].aux_row, 1u);
  EXPECT_EQ(res.pairs[1].target_row, 1u);
  EXPECT_EQ(res.pairs[1].aux_row, 1u);
  EXPECT_NEAR(res.pairs[2].similarity, 2.0 / 3.0, 1e-12);
}

TEST(LinkageAttack, BlocksOnNumericValueNotStringSpelling) {
  // "7.0" and "7" are the same week; "07" too. Blocking must compare
  // numerically when both sides parse.
  const RawTable target = parse_csv("week,gender,sleep\n7.0,f,6.0\n");
  const RawTable aux = parse_csv("week,gender,sleep\n7,f,6.1\n");
  const MatchResult res = linkage_attack(target, aux, demo_config());
  ASSERT_EQ(res.pairs.size(), 1u);
  EXPECT_EQ(res.pairs_blocked, 1u);
}

TEST(LinkageAttack, MissingCellsNeverMatch) {
  const RawTable target = parse_csv(
      "week,gender,sleep\n"
      ",f,7.0\n"
      "1,f,\n");
  const RawTable aux = parse_csv(
      "week,gender,sleep\n"
      ",f,7.0\n"   // missing block key on both sides: still no match
      "1,f,\n");   // missing numeric value on both sides: no score
  const MatchResult res = linkage_attack(target, aux, demo_config());
  EXPECT_TRUE(res.pairs.empty());
}

TEST(LinkageAttack, CarriesRowIdsWhenPresent) {
  RawTable target = parse_csv(
      "row_id,week,gender,sleep\n"
      "t-17,1,f,7.0\n");
  RawTable aux = parse_csv(
      "row_id,week,gender,sleep\n"
      "s-03,1,f,7.2\n");
  const MatchResult res = linkage_attack(target, aux, demo_config());
  ASSERT_EQ(res.pairs.size(), 1u);
  EXPECT_EQ(res.pairs[0].target_row_id, "t-17");
  EXPECT_EQ(res.pairs[0].aux_row_id, "s-03");

  // Without a row_id column the index doubles as the id.
  const RawTable bare_t = parse_csv("week,gender,sleep\n1,f,7.0\n");
  const RawTable bare_a = parse_csv("week,gender,sleep\n1,f,7.2\n");
  const MatchResult bare = linkage_attack(bare_t, bare_a, demo_config());
  ASSERT_EQ(bare.pairs.size(), 1u);
  EXPECT_EQ(bare.pairs[0].target_row_id, "0");
  EXPECT_EQ(bare.pairs[0].aux_row_id, "0");
}

TEST(LinkageAttack, MissingColumnsRaiseConfigError) {
  const RawTable ok = parse_csv("week,gender,sleep\n1,f,7.0\n");
  const RawTable no_sleep = parse_csv("week,gender\n1,f\n");
  EXPECT_THROW(linkage_attack(ok, no_sleep, demo_config()), ConfigError);
  EXPECT_THROW(linkage_attack(no_sleep, ok, demo_config()), ConfigError);
}

TEST(LinkageConfigValidate, RejectsBadKnobs) {
  LinkageConfig cfg = demo_config();
  cfg.scale = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = demo_config();
  cfg.offset = -1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = demo_config();
  cfg.numeric_col.clear();
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = demo_config();
  cfg.sim_threshold = 1.5;
  EXPECT_THROW(cfg.validate(), ConfigError);
  demo_config().validate();  // the baseline passes
}

TEST(MatchResultToJson, RoundTripsThroughAParser) {
  const RawTable target = parse_csv("week,gender,sleep\n1,f,7.0\n");
  const RawTable aux = parse_csv("week,gender,sleep\n1,f,7.2\n1,f,8.0\n");
  LinkageConfig cfg = demo_config();
  cfg.sim_threshold = 0.5;
  const MatchResult res = linkage_attack(target, aux, cfg);
  const std::string text = match_result_to_json(res);
  const auto doc = nlohmann::json::parse(text);
  ASSERT_EQ(doc.at("pairs").size(), res.pairs.size());
  EXPECT_EQ(doc.at("pairs_blocked").get<std::size_t>(), res.pairs_blocked);
  EXPECT_EQ(doc.at("pairs")[0].at("target_row").get<std::size_t>(),
            res.pairs[0].target_row);
  EXPECT_EQ(doc.at("pairs")[0].at("aux_row_id").get<std::string>(),
            res.pairs[0].aux_row_id);
  EXPECT_DOUBLE_EQ(doc.at("pairs")[0].at("similarity").get<double>(),
                   res.pairs[0].similarity);
}

}  // namespace
}  // namespace dpsynth
