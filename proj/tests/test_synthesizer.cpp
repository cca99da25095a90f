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

#include "dpsynth/aim.hpp"

#include <algorithm>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "dpsynth/error.hpp"
#include "dpsynth/marginals.hpp"

#include <nlohmann/json.hpp>

namespace dpsynth {
namespace {

// 1000 rows over three binary attributes with a == b planted exactly and c
// independent. Strong enough that a workload-aware synthesizer must pick up
// the (a, b) coupling at a generous budget.
Table planted_table() {
  Table t;
  for (int i = 0; i < 3; ++i) {
    AttributeSpec a;
    a.name = std::string(1, static_cast<char>('a' + i));
    a.domain_size = 2;
    t.schema.attributes.push_back(a);
  }
  for (std::size_t i = 0; i < 1000; ++i) {
    const std::size_t ab = (i * 7919) % 2;
    const std::size_t c = (i * 104729 / 3) % 2;
    t.rows.push_back({ab, ab, c});
  }
  return t;
}

Workload all_pairs(const Schema& schema) { return all_kway_workload(schema, 2); }

TEST(Synthesize, StaysWithinBudgetAndLogsEveryCharge) {
  const Table real = planted_table();
  const double rho = 0.5;
  const SynthesisResult res = synthesize(real, all_pairs(real.schema), rho, 3);

  EXPECT_LE(res.rho_charged, rho * (1.0 + 1e-9));
  double ledger_total = 0.0;
  for (const auto& e : res.ledger) ledger_total += e.rho;
  EXPECT_NEAR(ledger_total, res.rho_charged, 1e-12);
  EXPECT_FALSE(res.ledger.empty());
}

TEST(Synthesize, WarmStartMeasuresEveryOneWayMarginal) {
  const Table real = planted_table();
  const SynthesisResult res = synthesize(real, all_pairs(real.schema), 0.5, 3);
  std::set<std::string> init_labels;
  for (const auto& e : res.ledger)
    if (e.label.rfind("init:", 0) == 0) init_labels.insert(e.label);
  EXPECT_EQ(init_labels, (std::set<std::string>{"init:a", "init:b", "init:c"}));
}

TEST(Synthesize, MeasuredCliquesComeFromTheWorkload) {
  const Table real = planted_table();
  const Workload workload = all_pairs(real.schema);
  std::set<std::vector<std::size_t>> allowed;
  for (const auto& q : workload.queries) allowed.insert(q.attributes);
  const SynthesisResult res = synthesize(real, workload, 0.5, 3);
  ASSERT_FALSE(res.rounds.empty());
  for (const auto& r : res.rounds)
    EXPECT_TRUE(allowed.count(r.chosen)) << "round " << r.round;
}

TEST(Synthesize, IsDeterministicPerSeed) {
  const Table real = planted_table();
  const Workload workload = all_pairs(real.schema);
  const SynthesisResult a = synthesize(real, workload, 0.3, 11);
  const SynthesisResult b = synthesize(real, workload, 0.3, 11);
  EXPECT_EQ(a.synthetic.rows, b.synthetic.rows);
  ASSERT_EQ(a.rounds.size(), b.rounds.size());
  for (std::size_t i = 0; i < a.rounds.size(); ++i) {
    EXPECT_EQ(a.rounds[i].chosen, b.rounds[i].chosen);
    EXPECT_DOUBLE_EQ(a.rounds[i].rho_spent, b.rounds[i].rho_spent);
  }
  const SynthesisResult c = synthesize(real, workload, 0.3, 12);
  EXPECT_NE(c.synthetic.rows, a.synthetic.rows);
}

TEST(Synthesize, RecoversAPlantedCouplingAtHighBudget) {
  const Table real = planted_table();
  const Workload workload = all_pairs(real.schema);
  // rho = 50 corresponds to a very generous budget for 1000 rows.
  const SynthesisResult res = synthesize(real, workload, 50.0, 21);
  ASSERT_EQ(res.synthetic.n_rows(), real.n_rows());
  const double err = query_error(real, res.synthetic, {0, 1}, Norm::kL1);
  EXPECT_LT(err, 0.1);
  // The planted table has zero mass off the (a, b) diagonal; the synthetic
  // table must keep that mass small.
  const Marginal ab = compute_marginal(res.synthetic, {0, 1});
  const double off_diag = (ab.counts[1] + ab.counts[2]) / ab.total();
  EXPECT_LT(off_diag, 0.05);
}

TEST(Synthesize, HonorsExplicitOutputSize) {
  const Table real = planted_table();
  SynthesizerOptions options;
  options.n_output = 123;
  const SynthesisResult res =
      synthesize(real, all_pairs(real.schema), 0.5, 3, options);
  EXPECT_EQ(res.synthetic.n_rows(), 123u);
}

TEST(Synthesize, RoundsMaxCapsTheLoop) {
  const Table real = planted_table();
  SynthesizerOptions options;
  options.rounds_max = 2;
  const SynthesisResult res =
      synthesize(real, all_pairs(real.schema), 5.0, 3, options);
  EXPECT_LE(res.rounds.size(), 2u);
}

TEST(Synthesize, TinyBudgetStillProducesATable) {
  const Table real = planted_table();
  const SynthesisResult res =
      synthesize(real, all_pairs(real.schema), 1e-4, 3);
  EXPECT_EQ(res.synthetic.n_rows(), real.n_rows());
  EXPECT_LE(res.rho_charged, 1e-4 * (1.0 + 1e-9));
  // Schema must match the input so downstream metrics line up.
  EXPECT_EQ(res.synthetic.schema.size(), real.schema.size());
}

TEST(Synthesize, RejectsBadArguments) {
  const Table real = planted_table();
  const Workload workload = all_pairs(real.schema);
  EXPECT_THROW(synthesize(real, workload, 0.0, 3), ArgumentError);
  EXPECT_THROW(synthesize(real, workload, -1.0, 3), ArgumentError);
  Table empty;
  empty.schema = real.schema;
  EXPECT_THROW(synthesize(empty, workload, 0.5, 3), ArgumentError);
}

TEST(RoundLogToJson, SerializesNamesAndNumbers) {
  const Table real = planted_table();
  const SynthesisResult res = synthesize(real, all_pairs(real.schema), 0.5, 3);
  const std::string text = round_log_to_json(res.rounds, real.schema);
  ASSERT_FALSE(text.empty());
  EXPECT_EQ(text.back(), '\n');
  const auto parsed = nlohmann::json::parse(text);
  ASSERT_TRUE(parsed.is_array());
  ASSERT_EQ(parsed.size(), res.rounds.size());
  for (std::size_t i = 0; i < res.rounds.size(); ++i) {
    const auto& entry = parsed[i];
    EXPECT_EQ(entry.at("round").get<std::size_t>(), res.rounds[i].round);
    const auto names = entry.at("query").get<std::vector<std::string>>();
    ASSERT_EQ(names.size(), res.rounds[i].chosen.size());
    for (std::size_t a = 0; a < names.size(); ++a)
      EXPECT_EQ(names[a], real.schema.at(res.rounds[i].chosen[a]).name);
    EXPECT_DOUBLE_EQ(entry.at("rho").get<double>(), res.rounds[i].rho_spent);
  }
}

}  // namespace
}  // namespace dpsynth
