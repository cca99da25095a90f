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

#include "dpsynth/evaluate.hpp"

#include <gtest/gtest.h>

#include "dpsynth/error.hpp"

#include <nlohmann/json.hpp>

namespace dpsynth {
namespace {

// Longitudinal-shaped panel: 10 participants x 8 weeks with outcome and
// sleep wired to week so the correlation structure is real.
Table panel_table() {
  Table t;
  AttributeSpec participant;
  participant.name = "participant";
  participant.domain_size = 10;
  AttributeSpec week;
  week.name = "week";
  week.kind = AttributeKind::kOrdinal;
  week.domain_size = 8;
  AttributeSpec gender;
  gender.name = "gender";
  gender.domain_size = 3;
  AttributeSpec pss;
  pss.name = "pss";
  pss.kind = AttributeKind::kContinuous;
  pss.bin_edges = {18.0, 20.0, 22.0, 24.0};
  AttributeSpec tst;
  tst.name = "tst";
  tst.kind = AttributeKind::kContinuous;
  tst.bin_edges = {6.5, 7.0, 7.5};
  t.schema.attributes = {participant, week, gender, pss, tst};
  for (std::size_t p = 0; p < 10; ++p) {
    for (std::size_t w = 0; w < 8; ++w) {
      const std::size_t tst_code = (p + w) % 4;
      const std::size_t pss_code = std::min<std::size_t>(4, (w / 2) + (p % 2));
      t.rows.push_back({p, w, p % 3, pss_code, tst_code});
    }
  }
  return t;
}

EvalProtocol panel_protocol() {
  EvalProtocol protocol;
  protocol.target_col = "pss";
  protocol.top_k = 3;
  protocol.seed = 7;
  protocol.forest.n_trees = 30;
  protocol.group_col = "participant";
  protocol.week_col = "week";
  protocol.gender_col = "gender";
  protocol.sleep_col = "tst";
  return protocol;
}

TEST(UtilityReport, IdentityComparisonsAreExactlyZero) {
  const Table real = panel_table();
  const UtilityReport report =
      utility_report(real, {{1.0, real}}, panel_protocol());
  ASSERT_EQ(report.by_epsilon.size(), 1u);
  const TableEval& eval = report.by_epsilon[0].second;
  EXPECT_DOUBLE_EQ(eval.l1, 0.0);
  EXPECT_DOUBLE_EQ(eval.l2, 0.0);
  EXPECT_DOUBLE_EQ(eval.mean_abs_corr_delta, 0.0);
  EXPECT_DOUBLE_EQ(eval.max_abs_corr_delta, 0.0);
  // Same table, same split, same forest: the scores coincide.
  EXPECT_DOUBLE_EQ(eval.r2, report.real.r2);
  EXPECT_TRUE(report.real.has_lmm);
  EXPECT_TRUE(eval.has_lmm);
  EXPECT_DOUBLE_EQ(eval.lmm_week, report.real.lmm_week);
}

TEST(UtilityReport, OrdersByEpsilonAscending) {
  const Table real = panel_table();
  const UtilityReport report = utility_report(
      real, {{10.0, real}, {1.0, real}, {5.0, real}}, panel_protocol());
  ASSERT_EQ(report.by_epsilon.size(), 3u);
  EXPECT_DOUBLE_EQ(report.by_epsilon[0].first, 1.0);
  EXPECT_DOUBLE_EQ(report.by_epsilon[1].first, 5.0);
  EXPECT_DOUBLE_EQ(report.by_epsilon[2].first, 10.0);
}

TEST(UtilityReport, SkipsLmmWhenProtocolColumnsAreAbsent) {
  const Table real = panel_table();
  EvalProtocol protocol = panel_protocol();
  protocol.group_col.clear();
  const UtilityReport report = utility_report(real, {{1.0, real}}, protocol);
  EXPECT_FALSE(report.real.has_lmm);
  EXPECT_FALSE(report.by_epsilon[0].second.has_lmm);

  const std::string text = utility_report_to_json(report);
  const auto doc = nlohmann::json::parse(text);
  EXPECT_FALSE(doc.at("original").contains("lmm"));
}

TEST(UtilityReport, ConstantSyntheticTargetReportsNullR2) {
  const Table real = panel_table();
  Table flat = real;
  for (auto& row : flat.rows) row[3] = 2;  // pss pinned to one bin
  const UtilityReport report =
      utility_report(real, {{1.0, flat}}, panel_protocol());
  EXPECT_TRUE(report.by_epsilon[0].second.r2_degenerate);
  EXPECT_GT(report.by_epsilon[0].second.l1, 0.0);

  const auto doc = nlohmann::json::parse(utility_report_to_json(report));
  EXPECT_TRUE(doc.at("by_epsilon").at("1").at("r2").is_null());
  // The real table keeps its numeric score alongside.
  EXPECT_TRUE(doc.at("original").at("r2").is_number());
}

TEST(UtilityReport, JsonShapeCarriesEpsilonKeysInOrder) {
  const Table real = panel_table();
  const UtilityReport report = utility_report(
      real, {{100.0, real}, {1.0, real}}, panel_protocol());
  const std::string text = utility_report_to_json(report);
  EXPECT_EQ(text.back(), '\n');
  const auto doc = nlohmann::json::parse(text);
  ASSERT_TRUE(doc.at("by_epsilon").contains("1"));
  ASSERT_TRUE(doc.at("by_epsilon").contains("100"));
  const auto& entry = doc.at("by_epsilon").at("1");
  EXPECT_TRUE(entry.contains("l1"));
  EXPECT_TRUE(entry.contains("l2"));
  EXPECT_TRUE(entry.contains("mean_abs_corr_delta"));
  EXPECT_TRUE(entry.contains("r2"));
  EXPECT_TRUE(entry.at("lmm").contains("week"));
  EXPECT_TRUE(entry.at("lmm").contains("tst_dev"));
  // "1" must come before "100" in the serialized object.
  EXPECT_LT(text.find("\"1\""), text.find("\"100\""));
}

TEST(UtilityReport, RejectsBadEpsilonAndMismatchedSchemas) {
  const Table real = panel_table();
  EXPECT_THROW(utility_report(real, {{0.0, real}}, panel_protocol()),
               ArgumentError);
  EXPECT_THROW(utility_report(real, {{-3.0, real}}, panel_protocol()),
               ArgumentError);

  Table different = real;
  different.schema.attributes[1].domain_size = 9;
  EXPECT_THROW(utility_report(real, {{1.0, different}}, panel_protocol()),
               ArgumentError);

  EvalProtocol protocol = panel_protocol();
  protocol.target_col = "nope";
  EXPECT_THROW(utility_report(real, {{1.0, real}}, protocol), ArgumentError);
}

}  // namespace
}  // namespace dpsynth
