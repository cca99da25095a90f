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

#include "dpsynth/model.hpp"

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "dpsynth/error.hpp"

namespace dpsynth {
namespace {

Schema three_binary() {
  Schema s;
  for (int i = 0; i < 3; ++i) {
    AttributeSpec a;
    a.name = std::string(1, static_cast<char>('a' + i));
    a.domain_size = 2;
    s.attributes.push_back(a);
  }
  return s;
}

double l1_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double gap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) gap += std::abs(a[i] - b[i]);
  return gap;
}

TEST(FitModel, ReproducesASingleMeasuredMarginal) {
  Measurement m;
  m.attributes = {0, 1};
  m.noisy_counts = {40.0, 10.0, 10.0, 40.0};
  m.sigma = 1e-3;  // trust the measurement almost exactly
  const GraphicalModel model = fit_model(three_binary(), {m}, 100.0);
  EXPECT_DOUBLE_EQ(model.total_count(), 100.0);
  const Marginal got = model.marginal({0, 1});
  EXPECT_LT(l1_gap(got.counts, m.noisy_counts), 1e-3);
  // Unmeasured attribute stays uniform and independent.
  const Marginal c = model.marginal({2});
  EXPECT_NEAR(c.counts[0], 50.0, 1e-6);
  EXPECT_NEAR(c.counts[1], 50.0, 1e-6);
}

TEST(FitModel, OverlappingMeasurementsStayConsistent) {
  // Two overlapping pair measurements share attribute 1; the fitted model
  // must agree with itself on the shared one-way margin.
  Measurement ab;
  ab.attributes = {0, 1};
  ab.noisy_counts = {30.0, 20.0, 20.0, 30.0};
  ab.sigma = 1.0;
  Measurement bc;
  bc.attributes = {1, 2};
  bc.noisy_counts = {35.0, 15.0, 10.0, 40.0};
  bc.sigma = 1.0;
  const GraphicalModel model = fit_model(three_binary(), {ab, bc}, 100.0);

  const Marginal from_ab = model.marginal({0, 1});
  const Marginal from_bc = model.marginal({1, 2});
  // Margin of attribute 1 from each side.
  const double b0_ab = from_ab.counts[0] + from_ab.counts[2];
  const double b0_bc = from_bc.counts[0] + from_bc.counts[1];
  EXPECT_NEAR(b0_ab, b0_bc, 1e-4);
  EXPECT_NEAR(from_ab.total(), 100.0, 1e-9);
  EXPECT_NEAR(from_bc.total(), 100.0, 1e-9);
}

TEST(FitModel, InverseVarianceMergePullsTowardThePreciseMeasurement) {
  // Same scope measured twice: once noisily at 80/20, once precisely at
  // 20/80. The merged target must sit near the precise one.
  Measurement noisy;
  noisy.attributes = {0};
  noisy.noisy_counts = {80.0, 20.0};
  noisy.sigma = 100.0;
  Measurement precise;
  precise.attributes = {0};
  precise.noisy_counts = {20.0, 80.0};
  precise.sigma = 1.0;
  const GraphicalModel model =
      fit_model(three_binary(), {noisy, precise}, 100.0);
  const Marginal got = model.marginal({0});
  EXPECT_NEAR(got.counts[0], 20.0, 0.5);
  EXPECT_NEAR(got.counts[1], 80.0, 0.5);
}

TEST(FitModel, FloorsNegativeMergedCountsAtZero) {
  Measurement m;
  m.attributes = {0};
  m.noisy_counts = {-30.0, 120.0};  // noise pushed a count negative
  m.sigma = 1.0;
  const GraphicalModel model = fit_model(three_binary(), {m}, 100.0);
  const Marginal got = model.marginal({0});
  EXPECT_GE(got.counts[0], 0.0);
  EXPECT_NEAR(got.total(), 100.0, 1e-6);
}

TEST(FitModel, RejectsBadArguments) {
  Measurement m;
  m.attributes = {0};
  m.noisy_counts = {50.0, 50.0};
  m.sigma = 1.0;
  EXPECT_THROW(fit_model(three_binary(), {m}, 0.0), ArgumentError);
  EXPECT_THROW(fit_model(three_binary(), {m}, -5.0), ArgumentError);
  Measurement ragged;
  ragged.attributes = {0};
  ragged.noisy_counts = {1.0, 2.0, 3.0};  // wrong cell count for a binary
  ragged.sigma = 1.0;
  EXPECT_THROW(fit_model(three_binary(), {ragged}, 100.0), ArgumentError);
}

TEST(GraphicalModel, VariableEliminationAnswersCrossCliqueQueries) {
  // Chain a - b - c. The scope {a, c} lives in no clique, so the query has
  // to run variable elimination. With near-deterministic couplings
  // a = b = c, the implied (a, c) marginal concentrates on the diagonal.
  Measurement ab;
  ab.attributes = {0, 1};
  ab.noisy_counts = {49.0, 1.0, 1.0, 49.0};
  ab.sigma = 1e-3;
  Measurement bc;
  bc.attributes = {1, 2};
  bc.noisy_counts = {49.0, 1.0, 1.0, 49.0};
  bc.sigma = 1e-3;
  const GraphicalModel model = fit_model(three_binary(), {ab, bc}, 100.0);
  ASSERT_EQ(model.tree().find_covering_clique({0, 2}), JunctionTree::npos);

  const Marginal ac = model.marginal({0, 2});
  EXPECT_NEAR(ac.total(), 100.0, 1e-6);
  // P(c = a) = 0.98^2 + 0.02^2 per chain step composition.
  const double diag = (ac.counts[0] + ac.counts[3]) / 100.0;
  EXPECT_NEAR(diag, 0.98 * 0.98 + 0.02 * 0.02, 1e-3);
}

TEST(GraphicalModel, SampleMatchesModelMarginals) {
  Measurement ab;
  ab.attributes = {0, 1};
  ab.noisy_counts = {45.0, 5.0, 5.0, 45.0};
  ab.sigma = 1e-3;
  Measurement bc;
  bc.attributes = {1, 2};
  bc.noisy_counts = {40.0, 10.0, 10.0, 40.0};
  bc.sigma = 1e-3;
  const GraphicalModel model = fit_model(three_binary(), {ab, bc}, 100.0);

  Rng rng(99);
  const Table sample = model.sample(20000, rng);
  ASSERT_EQ(sample.n_rows(), 20000u);
  ASSERT_EQ(sample.n_cols(), 3u);

  const Marginal want = model.marginal({0, 1});
  const Marginal got = compute_marginal(sample, {0, 1});
  for (std::size_t cell = 0; cell < 4; ++cell) {
    EXPECT_NEAR(got.counts[cell] / 20000.0, want.counts[cell] / 100.0, 0.02)
        << "cell " << cell;
  }
  // The cross-clique dependence must survive sampling too: with these
  // couplings P(a = c) = 0.9 * 0.8 + 0.1 * 0.2 = 0.74.
  const Marginal ac = compute_marginal(sample, {0, 2});
  const double diag = (ac.counts[0] + ac.counts[3]) / 20000.0;
  EXPECT_NEAR(diag, 0.74, 0.02);
}

TEST(GraphicalModel, SamplingIsDeterministicPerSeed) {
  Measurement m;
  m.attributes = {0, 1};
  m.noisy_counts = {30.0, 20.0, 25.0, 25.0};
  m.sigma = 1.0;
  const GraphicalModel model = fit_model(three_binary(), {m}, 100.0);
  Rng r1(5);
  Rng r2(5);
  EXPECT_EQ(model.sample(200, r1).rows, model.sample(200, r2).rows);
  Rng r3(6);
  EXPECT_NE(model.sample(200, r3).rows, model.sample(200, r1).rows);
}

}  // namespace
}  // namespace dpsynth
