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

#include "dpsynth/forest.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dpsynth/error.hpp"
#include "dpsynth/stats.hpp"

namespace dpsynth {
namespace {

// y = 3 * x0 - 2 * x1 + small noise: strong structure a forest must find.
void make_signal(std::uint64_t seed, std::size_t n,
                 std::vector<std::vector<double>>* rows,
                 std::vector<double>* target) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> x(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 0.05);
  for (std::size_t i = 0; i < n; ++i) {
    const double x0 = x(rng);
    const double x1 = x(rng);
    const double x2 = x(rng);  // pure distractor
    rows->push_back({x0, x1, x2});
    target->push_back(3.0 * x0 - 2.0 * x1 + noise(rng));
  }
}

TEST(RandomForest, LearnsAStrongSignal) {
  std::vector<std::vector<double>> train_x, test_x;
  std::vector<double> train_y, test_y;
  make_signal(91, 400, &train_x, &train_y);
  make_signal(92, 100, &test_x, &test_y);

  ForestConfig config;
  config.n_trees = 100;
  config.seed = 1;
  const RandomForest forest = RandomForest::fit(train_x, train_y, config);
  EXPECT_FALSE(forest.degenerate());
  EXPECT_EQ(forest.n_trees(), 100u);
  const double r2 = r2_score(forest.predict(test_x), test_y);
  EXPECT_GT(r2, 0.8);
}

TEST(RandomForest, DeterministicPerSeedAndSensitiveToIt) {
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  make_signal(93, 80, &x, &y);
  ForestConfig config;
  config.n_trees = 20;
  config.seed = 7;
  const RandomForest a = RandomForest::fit(x, y, config);
  const RandomForest b = RandomForest::fit(x, y, config);
  EXPECT_EQ(a.predict(x), b.predict(x));
  config.seed = 8;
  const RandomForest c = RandomForest::fit(x, y, config);
  EXPECT_NE(c.predict(x), a.predict(x));
}

TEST(RandomForest, ConstantTargetIsDegenerate) {
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  make_signal(94, 40, &x, &y);
  std::fill(y.begin(), y.end(), 42.0);
  const RandomForest forest = RandomForest::fit(x, y);
  EXPECT_TRUE(forest.degenerate());
  EXPECT_DOUBLE_EQ(forest.predict(x[0]), 42.0);
  EXPECT_DOUBLE_EQ(forest.predict(x[17]), 42.0);
}

TEST(RandomForest, PredictionsInterpolateLeafMeans) {
  // With a single feature and a clean step, predictions stay within the
  // observed target range.
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (int i = 0; i < 50; ++i) {
    x.push_back({static_cast<double>(i)});
    y.push_back(i < 25 ? 1.0 : 5.0);
  }
  ForestConfig config;
  config.n_trees = 50;
  config.seed = 3;
  const RandomForest forest = RandomForest::fit(x, y, config);
  for (int i = 0; i < 50; ++i) {
    const double p = forest.predict(x[static_cast<std::size_t>(i)]);
    EXPECT_GE(p, 1.0);
    EXPECT_LE(p, 5.0);
  }
  // Deep inside each plateau the answer is unambiguous.
  EXPECT_NEAR(forest.predict({2.0}), 1.0, 0.2);
  EXPECT_NEAR(forest.predict({47.0}), 5.0, 0.2);
}

TEST(RandomForest, RejectsTinyOrRaggedInputs) {
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  make_signal(95, 9, &x, &y);  // one row short of the minimum
  EXPECT_THROW(RandomForest::fit(x, y), ArgumentError);

  make_signal(96, 11, &x, &y);
  y.pop_back();
  EXPECT_THROW(RandomForest::fit(x, y), ArgumentError);

  std::vector<std::vector<double>> ragged;
  std::vector<double> ry;
  make_signal(97, 20, &ragged, &ry);
  ragged[5].pop_back();
  EXPECT_THROW(RandomForest::fit(ragged, ry), ArgumentError);
}

TEST(RandomForest, PredictRejectsWrongWidth) {
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  make_signal(98, 30, &x, &y);
  const RandomForest forest = RandomForest::fit(x, y);
  EXPECT_THROW(forest.predict({1.0}), ArgumentError);
}

}  // namespace
}  // namespace dpsynth
