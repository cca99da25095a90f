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

#include "dpsynth/marginals.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dpsynth/error.hpp"
#include "support/oracles.hpp"

namespace dpsynth {
namespace {

using testing::brute_marginal;
using testing::brute_query_error;
using testing::brute_workload_error;
using testing::random_table;

TEST(FlatIndex, LastCoordinateVariesFastest) {
  const std::vector<std::size_t> sizes{2, 3, 4};
  EXPECT_EQ(flat_index(sizes, {0, 0, 0}), 0u);
  EXPECT_EQ(flat_index(sizes, {0, 0, 1}), 1u);
  EXPECT_EQ(flat_index(sizes, {0, 1, 0}), 4u);
  EXPECT_EQ(flat_index(sizes, {1, 0, 0}), 12u);
  EXPECT_EQ(flat_index(sizes, {1, 2, 3}), 23u);
}

TEST(FlatIndex, RoundTripsEveryCell) {
  const std::vector<std::size_t> sizes{3, 2, 5};
  std::vector<std::size_t> codes;
  for (std::size_t flat = 0; flat < 30; ++flat) {
    unflatten_index(sizes, flat, &codes);
    EXPECT_EQ(flat_index(sizes, codes), flat);
  }
}

TEST(ComputeMarginal, MatchesBruteForceOnRandomTables) {
  std::mt19937_64 rng(101);
  for (int instance = 0; instance < 30; ++instance) {
    const std::size_t d = 2 + rng() % 4;
    std::vector<std::size_t> domains(d);
    for (auto& dom : domains) dom = 2 + rng() % 4;
    const Table table = random_table(&rng, 40 + rng() % 60, domains);

    std::vector<std::size_t> attrs;
    for (std::size_t a = 0; a < d; ++a)
      if (rng() % 2 == 0) attrs.push_back(a);
    if (attrs.empty()) attrs.push_back(rng() % d);

    const Marginal got = compute_marginal(table, attrs);
    const Marginal want = brute_marginal(table, attrs);
    ASSERT_EQ(got.attributes, want.attributes);
    ASSERT_EQ(got.sizes, want.sizes);
    ASSERT_EQ(got.counts.size(), want.counts.size());
    for (std::size_t c = 0; c < got.counts.size(); ++c)
      EXPECT_DOUBLE_EQ(got.counts[c], want.counts[c]) << "cell " << c;
    EXPECT_DOUBLE_EQ(got.total(), static_cast<double>(table.n_rows()));
  }
}

TEST(ComputeMarginal, CallerOrderDoesNotMatter) {
  std::mt19937_64 rng(11);
  const Table table = random_table(&rng, 50, {3, 4, 2});
  const Marginal forward = compute_marginal(table, {0, 2});
  const Marginal backward = compute_marginal(table, {2, 0});
  EXPECT_EQ(forward.attributes, backward.attributes);
  EXPECT_EQ(forward.counts, backward.counts);
}

TEST(ComputeMarginal, RejectsBadAttributeSets) {
  std::mt19937_64 rng(12);
  const Table table = random_table(&rng, 10, {2, 2});
  EXPECT_THROW(compute_marginal(table, {0, 0}), ArgumentError);
  EXPECT_THROW(compute_marginal(table, {5}), ArgumentError);
  EXPECT_THROW(compute_marginal(table, {}), ArgumentError);
}

TEST(ComputeMarginal, RefusesMarginalsOverTheCellCap) {
  Table table;
  for (int i = 0; i < 2; ++i) {
    AttributeSpec a;
    a.name = "big" + std::to_string(i);
    a.domain_size = 2050;  // 2050^2 > 1 << 22
    table.schema.attributes.push_back(a);
  }
  table.rows.push_back({0, 0});
  EXPECT_GT(marginal_cells(table.schema, {0, 1}), kDenseCellCap);
  EXPECT_THROW(compute_marginal(table, {0, 1}), ModelError);
}

TEST(Marginal, NormalizedSumsToOneAndKeepsZeros) {
  Marginal m;
  m.attributes = {0};
  m.sizes = {4};
  m.counts = {1.0, 3.0, 0.0, 4.0};
  const std::vector<double> p = m.normalized();
  EXPECT_DOUBLE_EQ(p[0], 0.125);
  EXPECT_DOUBLE_EQ(p[1], 0.375);
  EXPECT_DOUBLE_EQ(p[2], 0.0);
  EXPECT_DOUBLE_EQ(p[3], 0.5);

  m.counts = {0.0, 0.0, 0.0, 0.0};
  const std::vector<double> z = m.normalized();
  for (double v : z) EXPECT_DOUBLE_EQ(v, 0.0);
}

TEST(QueryError, ZeroOnIdenticalTablesAndMatchesBruteForce) {
  std::mt19937_64 rng(13);
  const Table table = random_table(&rng, 80, {3, 3, 2});
  EXPECT_DOUBLE_EQ(query_error(table, table, {0, 1}, Norm::kL1), 0.0);
  EXPECT_DOUBLE_EQ(query_error(table, table, {0, 1}, Norm::kL2), 0.0);

  for (int instance = 0; instance < 30; ++instance) {
    std::vector<std::size_t> domains{2 + rng() % 3, 2 + rng() % 3};
    const Table a = random_table(&rng, 30 + rng() % 40, domains);
    const Table b = random_table(&rng, 30 + rng() % 40, domains);
    const Norm norm = (instance % 2 == 0) ? Norm::kL1 : Norm::kL2;
    EXPECT_NEAR(query_error(a, b, {0, 1}, norm),
                brute_query_error(a, b, {0, 1}, norm), 1e-12);
  }
}

TEST(WorkloadError, WeightAveragesQueryErrors) {
  std::mt19937_64 rng(14);
  const Table a = random_table(&rng, 60, {3, 2, 4});
  const Table b = random_table(&rng, 60, {3, 2, 4});

  Workload w;
  w.queries = {{{0, 1}, 1.0}, {{1, 2}, 3.0}, {{0, 2}, 0.5}};
  EXPECT_NEAR(workload_error(w, a, b, Norm::kL1),
              brute_workload_error(w, a, b, Norm::kL1), 1e-12);

  // A single query with any weight reduces to query_error.
  Workload single;
  single.queries = {{{0, 2}, 7.0}};
  EXPECT_NEAR(workload_error(single, a, b, Norm::kL1),
              query_error(a, b, {0, 2}, Norm::kL1), 1e-12);
}

TEST(MutualInformation, IndependentIsNearZeroDependentIsLogK) {
  // Exact product joint: MI is exactly zero.
  Marginal indep;
  indep.attributes = {0, 1};
  indep.sizes = {2, 2};
  indep.counts = {12.0, 36.0, 4.0, 12.0};  // (0.75, 0.25) x (0.25, 0.75)
  EXPECT_NEAR(mutual_information(indep), 0.0, 1e-12);

  // Perfectly coupled uniform pair: MI = ln(k).
  const std::size_t k = 3;
  Marginal coupled;
  coupled.attributes = {0, 1};
  coupled.sizes = {k, k};
  coupled.counts.assign(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) coupled.counts[i * k + i] = 10.0;
  EXPECT_NEAR(mutual_information(coupled), std::log(3.0), 1e-12);

  Marginal empty;
  empty.attributes = {0, 1};
  empty.sizes = {2, 2};
  empty.counts.assign(4, 0.0);
  EXPECT_THROW(mutual_information(empty), ArgumentError);
}

TEST(MaxSpanningTree, RecoversANoisyChain) {
  // X0 -> X1 -> X2 with 10% flips at each hop. The direct (0, 2) link is
  // strictly weaker than either hop, so the tree must be the chain.
  Table table;
  for (int i = 0; i < 3; ++i) {
    AttributeSpec a;
    a.name = "x" + std::to_string(i);
    a.domain_size = 2;
    table.schema.attributes.push_back(a);
  }
  const auto add = [&](std::size_t x0, std::size_t x1, std::size_t x2,
                       int count) {
    for (int c = 0; c < count; ++c) table.rows.push_back({x0, x1, x2});
  };
  for (std::size_t x0 = 0; x0 < 2; ++x0)
    for (std::size_t x1 = 0; x1 < 2; ++x1)
      for (std::size_t x2 = 0; x2 < 2; ++x2) {
        const double p = 0.5 * (x1 == x0 ? 0.9 : 0.1) * (x2 == x1 ? 0.9 : 0.1);
        add(x0, x1, x2, static_cast<int>(std::lround(1000.0 * p)));
      }
  ASSERT_EQ(table.n_rows(), 1000u);

  const auto edges = max_spanning_tree(table);
  ASSERT_EQ(edges.size(), 2u);
  EXPECT_EQ(edges[0], (std::pair<std::size_t, std::size_t>{0, 1}));
  EXPECT_EQ(edges[1], (std::pair<std::size_t, std::size_t>{1, 2}));
}

TEST(MaxSpanningTree, NeedsAtLeastTwoAttributes) {
  std::mt19937_64 rng(15);
  const Table table = random_table(&rng, 20, {3});
  EXPECT_THROW(max_spanning_tree(table), ArgumentError);
  const Table pair_table = random_table(&rng, 20, {3, 2});
  EXPECT_EQ(max_spanning_tree(pair_table).size(), 1u);
}

}  // namespace
}  // namespace dpsynth
