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

#ifndef DPSYNTH_JUNCTION_TREE_HPP_
#define DPSYNTH_JUNCTION_TREE_HPP_

#include <cstddef>
#include <vector>

namespace dpsynth {

struct JunctionTreeEdge {
  std::size_t u = 0;  // clique indices
  std::size_t v = 0;
  std::vector<std::size_t> separator;  // sorted intersection of the cliques
};

// Clique tree (in general a forest) over attribute indices 0..n_vars-1.
// Cliques are sorted attribute sets; every attribute appears in at least
// one clique; edges satisfy the running-intersection property.
struct JunctionTree {
  std::size_t n_vars = 0;
  std::vector<std::vector<std::size_t>> cliques;
  std::vector<JunctionTreeEdge> edges;

  // edges incident to each clique, filled by build_junction_tree.
  std::vector<std::vector<std::size_t>> adjacency;

  std::size_t max_clique_size() const;

  // Index of a clique containing all of `attrs`, or npos.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t find_covering_clique(const std::vector<std::size_t>& attrs) const;
};

// Whether the graph (adjacency sets over 0..n-1) is chordal, by maximum
// cardinality search with the Tarjan-Yannakakis verification pass.
bool is_chordal(const std::vector<std::vector<bool>>& adjacency);

// Builds a junction tree whose cliques cover every given attribute set.
//
// The attribute sets induce an undirected graph; a greedy min-degree
// elimination triangulates it, maximal elimination cliques become tree
// nodes, and a maximum-weight spanning forest on pairwise separator sizes
// (Kruskal, ties broken on lower clique indices) connects them. Attributes
// in no set get singleton cliques, so the result always covers all n_vars.
// The construction is deterministic for a given input.
JunctionTree build_junction_tree(
    std::size_t n_vars, const std::vector<std::vector<std::size_t>>& attr_sets);

// Verifies the running-intersection property: for every attribute, the
// cliques containing it form a connected subtree. Used by tests and by
// model fitting as a postcondition; throws StructuralError on violation.
void check_running_intersection(const JunctionTree& tree);

}  // namespace dpsynth

#endif  // DPSYNTH_JUNCTION_TREE_HPP_
