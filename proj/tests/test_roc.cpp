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

#include "dpsynth/roc.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "dpsynth/error.hpp"
#include "support/oracles.hpp"

namespace dpsynth {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(RocCurve, PerfectSeparationScoresOne) {
  // Positives all score lower than negatives: low score = positive, so the
  // classifier is perfect.
  const RocCurve curve = roc_curve({0.1, 0.2, 0.3}, {0.8, 0.9, 1.0});
  EXPECT_DOUBLE_EQ(curve.auc, 1.0);
  const RocCurve inverted = roc_curve({0.8, 0.9, 1.0}, {0.1, 0.2, 0.3});
  EXPECT_DOUBLE_EQ(inverted.auc, 0.0);
}

TEST(RocCurve, AllTiedScoresHalf) {
  const RocCurve curve = roc_curve({0.5, 0.5, 0.5}, {0.5, 0.5});
  EXPECT_DOUBLE_EQ(curve.auc, 0.5);
}

TEST(RocCurve, SentinelsAndMonotonicity) {
  const RocCurve curve = roc_curve({0.1, 0.4, 0.4}, {0.2, 0.4, 0.7});
  ASSERT_GE(curve.points.size(), 2u);
  EXPECT_EQ(curve.points.front().threshold, -kInf);
  EXPECT_DOUBLE_EQ(curve.points.front().fpr, 0.0);
  EXPECT_DOUBLE_EQ(curve.points.front().tpr, 0.0);
  EXPECT_EQ(curve.points.back().threshold, kInf);
  EXPECT_DOUBLE_EQ(curve.points.back().fpr, 1.0);
  EXPECT_DOUBLE_EQ(curve.points.back().tpr, 1.0);
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    EXPECT_LT(curve.points[i - 1].threshold, curve.points[i].threshold);
    EXPECT_GE(curve.points[i].fpr, curve.points[i - 1].fpr);
    EXPECT_GE(curve.points[i].tpr, curve.points[i - 1].tpr);
  }
}

TEST(RocCurve, AucEqualsTheRankStatisticOnRandomFixtures) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> value(0.0, 1.0);
  std::uniform_int_distribution<int> size(1, 40);
  std::uniform_int_distribution<int> grid(1, 8);
  for (int instance = 0; instance < 100; ++instance) {
    std::vector<double> in(size(rng));
    std::vector<double> out(size(rng));
    // Half the fixtures use a coarse grid so ties actually occur.
    const bool coarse = instance % 2 == 0;
    for (auto& v : in) v = coarse ? grid(rng) / 8.0 : value(rng);
    for (auto& v : out) v = coarse ? grid(rng) / 8.0 : value(rng);
    const RocCurve curve = roc_curve(in, out);
    EXPECT_NEAR(curve.auc, testing::mann_whitney_auc(in, out), 1e-12)
        << "instance " << instance;
  }
}

TEST(RocCurve, RejectsEmptyOrNonFiniteInputs) {
  EXPECT_THROW(roc_curve({}, {0.5}), ArgumentError);
  EXPECT_THROW(roc_curve({0.5}, {}), ArgumentError);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(roc_curve({nan}, {0.5}), ArgumentError);
  EXPECT_THROW(roc_curve({0.5}, {kInf}), ArgumentError);
}

TEST(YoudenThreshold, PicksTheSeparatorAndPrefersLowerOnTies) {
  // Positives at 1 and 2, negatives at 3 and 4: any threshold in [2, 3)
  // separates perfectly; the curve only contains observed scores, so 2 wins.
  const RocCurve perfect = roc_curve({1.0, 2.0}, {3.0, 4.0});
  EXPECT_DOUBLE_EQ(youden_threshold(perfect), 2.0);

  // Total ties: tpr - fpr is 0 everywhere, so the lowest threshold (the
  // -inf sentinel) is returned.
  const RocCurve flat = roc_curve({0.5}, {0.5});
  EXPECT_EQ(youden_threshold(flat), -kInf);
}

TEST(RocToCsv, HeaderOrderingAndInfinityRendering) {
  const RocCurve curve = roc_curve({0.25}, {0.75});
  const std::string text = roc_to_csv(curve);
  std::istringstream lines(text);
  std::string line;
  ASSERT_TRUE(std::getline(lines, line));
  EXPECT_EQ(line, "threshold,fpr,tpr");
  ASSERT_TRUE(std::getline(lines, line));
  EXPECT_EQ(line.rfind("-inf,", 0), 0u);
  std::string last;
  std::size_t n_rows = 1;
  while (std::getline(lines, line)) {
    last = line;
    ++n_rows;
  }
  EXPECT_EQ(last.rfind("inf,", 0), 0u);
  EXPECT_EQ(n_rows, curve.points.size());
}

}  // namespace
}  // namespace dpsynth
