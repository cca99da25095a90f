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

#include "dpsynth/factor.hpp"

#include <gtest/gtest.h>

namespace dpsynth {
namespace {

// Layout reminder used throughout: scope {0, 1} with sizes {2, 3} stores
// cell (i, j) at i * 3 + j (the last attribute varies fastest).

TEST(Factor, ConstantFillAndSum) {
  const Factor f({0, 2}, {2, 3}, 0.5);
  EXPECT_EQ(f.n_cells(), 6u);
  EXPECT_DOUBLE_EQ(f.sum(), 3.0);
}

TEST(Factor, MarginalSumsOutMissingAttributes) {
  // f(a, b) over sizes {2, 3}.
  const Factor f({0, 1}, {2, 3}, {1, 2, 3, 4, 5, 6});
  const Factor fa = f.marginal({0});
  ASSERT_EQ(fa.attributes(), (std::vector<std::size_t>{0}));
  EXPECT_DOUBLE_EQ(fa.values()[0], 6.0);   // 1 + 2 + 3
  EXPECT_DOUBLE_EQ(fa.values()[1], 15.0);  // 4 + 5 + 6
  const Factor fb = f.marginal({1});
  EXPECT_DOUBLE_EQ(fb.values()[0], 5.0);
  EXPECT_DOUBLE_EQ(fb.values()[1], 7.0);
  EXPECT_DOUBLE_EQ(fb.values()[2], 9.0);
  // Keeping the full scope copies; keep order does not matter.
  const Factor all = f.marginal({1, 0});
  EXPECT_EQ(all.values(), f.values());
  // Keeping nothing gives the scalar total.
  const Factor none = f.marginal({});
  ASSERT_EQ(none.n_cells(), 1u);
  EXPECT_DOUBLE_EQ(none.values()[0], 21.0);
}

TEST(Factor, ProductMatchesHandComputation) {
  const Factor fa({0}, {2}, {2, 3});
  const Factor fb({1}, {2}, {5, 7});
  const Factor prod = Factor::product(fa, fb);
  ASSERT_EQ(prod.attributes(), (std::vector<std::size_t>{0, 1}));
  ASSERT_EQ(prod.sizes(), (std::vector<std::size_t>{2, 2}));
  EXPECT_EQ(prod.values(), (std::vector<double>{10, 14, 15, 21}));

  // Overlapping scopes multiply on the shared coordinate.
  const Factor g({0, 1}, {2, 2}, {1, 2, 3, 4});
  const Factor h({1}, {2}, {10, 100});
  const Factor gh = Factor::product(g, h);
  EXPECT_EQ(gh.values(), (std::vector<double>{10, 200, 30, 400}));
}

TEST(Factor, MultiplyExpandBroadcasts) {
  Factor f({0, 1}, {2, 2}, {1, 2, 3, 4});
  f.multiply_expand(Factor({0}, {2}, {10, 100}));
  EXPECT_EQ(f.values(), (std::vector<double>{10, 20, 300, 400}));
  f.multiply_expand(Factor({1}, {2}, {1, 2}));
  EXPECT_EQ(f.values(), (std::vector<double>{10, 40, 300, 800}));
}

TEST(Factor, MultiplyRatioExpandTreatsZeroDenAsZero) {
  Factor f({0, 1}, {2, 2}, {1, 2, 3, 4});
  const Factor num({0}, {2}, {6, 0});
  const Factor den({0}, {2}, {3, 0});
  f.multiply_ratio_expand(num, den);
  // Row 0 scaled by 6/3 = 2; row 1 zeroed by the 0/0 convention.
  EXPECT_EQ(f.values(), (std::vector<double>{2, 4, 0, 0}));
}

TEST(Factor, RescaleToTargetAndZeroStaysZero) {
  Factor f({0}, {4}, {1, 1, 1, 1});
  f.rescale_to(100.0);
  EXPECT_DOUBLE_EQ(f.sum(), 100.0);
  EXPECT_DOUBLE_EQ(f.values()[0], 25.0);

  Factor zero({0}, {3}, 0.0);
  zero.rescale_to(10.0);
  EXPECT_DOUBLE_EQ(zero.sum(), 0.0);
}

TEST(Factor, SlicePinsAttributes) {
  // f(a, b) with sizes {2, 3}: slice at a = 1 keeps the second row.
  const Factor f({0, 1}, {2, 3}, {1, 2, 3, 4, 5, 6});
  const Factor row = f.slice({0}, {1});
  ASSERT_EQ(row.attributes(), (std::vector<std::size_t>{1}));
  EXPECT_EQ(row.values(), (std::vector<double>{4, 5, 6}));
  const Factor cell = f.slice({0, 1}, {0, 2});
  ASSERT_EQ(cell.n_cells(), 1u);
  EXPECT_DOUBLE_EQ(cell.values()[0], 3.0);
}

TEST(Factor, ProductThenMarginalIsScaledMarginal) {
  // Summing b out of f(a) * g(b) gives f(a) * sum(g).
  const Factor fa({0}, {3}, {1, 2, 3});
  const Factor gb({1}, {2}, {4, 6});
  const Factor back = Factor::product(fa, gb).marginal({0});
  EXPECT_EQ(back.values(), (std::vector<double>{10, 20, 30}));
}

}  // namespace
}  // namespace dpsynth
