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

#ifndef DPSYNTH_MARGINALS_HPP_
#define DPSYNTH_MARGINALS_HPP_

#include <cstddef>
#include <utility>
#include <vector>

#include "dpsynth/schema.hpp"
#include "dpsynth/table.hpp"

namespace dpsynth {

// Largest dense contingency table this library will materialize. Marginal
// queries and model inference both refuse cliques beyond this many cells.
inline constexpr std::size_t kDenseCellCap = std::size_t{1} << 22;

// Mixed-radix index mapping shared by marginals and factors: the LAST
// coordinate varies fastest.
std::size_t flat_index(const std::vector<std::size_t>& sizes,
                       const std::vector<std::size_t>& codes);
void unflatten_index(const std::vector<std::size_t>& sizes, std::size_t flat,
                     std::vector<std::size_t>* codes);

// Dense contingency table over a sorted set of attributes.
struct Marginal {
  std::vector<std::size_t> attributes;  // strictly increasing
  std::vector<std::size_t> sizes;       // total_codes per attribute
  std::vector<double> counts;           // size = product(sizes)

  std::size_t n_cells() const { return counts.size(); }
  double total() const;

  // counts scaled to sum to one; all-zero counts stay all zero.
  std::vector<double> normalized() const;
};

// Number of cells the marginal over `attrs` would have.
std::size_t marginal_cells(const Schema& schema,
                           const std::vector<std::size_t>& attrs);

// Exact counts of the table projected onto `attrs`. Attributes must be
// distinct and in range; they are sorted internally, so the caller's order
// does not matter. Throws ModelError if the result would exceed
// kDenseCellCap cells.
Marginal compute_marginal(const Table& table, std::vector<std::size_t> attrs);

enum class Norm { kL1, kL2 };

// Distance between two tables as seen through one workload query: the
// marginal of each table over the query's attributes is normalized to a
// frequency vector and the vectors are compared in the given norm.
double query_error(const Table& a, const Table& b,
                   const std::vector<std::size_t>& attrs, Norm norm);

// Weight-averaged query_error over all workload queries.
double workload_error(const Workload& workload, const Table& a,
                      const Table& b, Norm norm);

// Mutual information of a two-attribute joint, in nats: computed from the
// normalized joint and its two implied one-way margins, with 0 * ln(0/q)
// taken as 0. Requires total() > 0.
double mutual_information(const Marginal& joint);

// Convenience: MI of the empirical joint of two table columns.
double mutual_information(const Table& table, std::size_t i, std::size_t j);

// Maximum-weight spanning tree over the complete attribute graph weighted
// by pairwise mutual information (greedy Kruskal). Ties break
// lexicographically on (i, j), so the result is deterministic. Returns
// exactly d - 1 edges as (i, j) with i < j, sorted.
std::vector<std::pair<std::size_t, std::size_t>> max_spanning_tree(
    const Table& table);

}  // namespace dpsynth

#endif  // DPSYNTH_MARGINALS_HPP_
