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

#include "dpsynth/rng.hpp"

#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

namespace dpsynth {
namespace {

TEST(MixSeed, DeterministicAndSpread) {
  EXPECT_EQ(mix_seed(42, 7), mix_seed(42, 7));
  // Nearby inputs land far apart; a run of indices never collides.
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(mix_seed(123, i));
  EXPECT_EQ(seen.size(), 10000u);
  EXPECT_NE(mix_seed(0, 0), mix_seed(0, 1));
  EXPECT_NE(mix_seed(0, 0), mix_seed(1, 0));
}

TEST(Rng, SameSeedSameStream) {
  Rng a(99);
  Rng b(99);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, UniformBoundsAndMean) {
  Rng rng(1);
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.01);
}

TEST(Rng, UniformOpenIsPositive) {
  Rng rng(2);
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform_open();
    ASSERT_GT(u, 0.0);
    ASSERT_LE(u, 1.0);
  }
}

TEST(Rng, NormalMoments) {
  Rng rng(3);
  const int n = 50000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  EXPECT_NEAR(mean, 0.0, 0.02);
  EXPECT_NEAR(var, 1.0, 0.03);
}

TEST(Rng, UniformIndexStaysInRange) {
  Rng rng(4);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const std::uint64_t k = rng.uniform_index(7);
    ASSERT_LT(k, 7u);
    ++hits[k];
  }
  for (const int h : hits) EXPECT_GT(h, 800);  // roughly uniform
  Rng one(5);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(one.uniform_index(1), 0u);
}

TEST(Rng, CategoricalFollowsWeights) {
  Rng rng(6);
  const std::vector<double> w = {1.0, 3.0, 0.0, 4.0};
  std::vector<int> hits(4, 0);
  const int n = 40000;
  for (int i = 0; i < n; ++i) ++hits[rng.categorical(w)];
  EXPECT_EQ(hits[2], 0);
  EXPECT_NEAR(hits[0] / double(n), 1.0 / 8.0, 0.01);
  EXPECT_NEAR(hits[1] / double(n), 3.0 / 8.0, 0.015);
  EXPECT_NEAR(hits[3] / double(n), 4.0 / 8.0, 0.015);
}

TEST(Rng, CategoricalAllZeroFallsBackToUniform) {
  Rng rng(7);
  std::vector<int> hits(3, 0);
  for (int i = 0; i < 9000; ++i) ++hits[rng.categorical({0.0, 0.0, 0.0})];
  for (const int h : hits) EXPECT_GT(h, 2500);
}

TEST(Rng, ChildStreamsAreIndependent) {
  Rng root(11);
  Rng c0 = root.child(0);
  Rng c1 = root.child(1);
  EXPECT_NE(c0.next_u64(), c1.next_u64());
  // A child is reproducible from the same parent seed and index.
  Rng again = Rng(11).child(0);
  Rng c0b = Rng(11).child(0);
  EXPECT_EQ(again.next_u64(), c0b.next_u64());
}

}  // namespace
}  // namespace dpsynth
