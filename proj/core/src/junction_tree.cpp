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

#include "dpsynth/junction_tree.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "dpsynth/error.hpp"

namespace dpsynth {
namespace {

std::vector<std::size_t> sorted_intersection(
    const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

bool is_subset(const std::vector<std::size_t>& a,
               const std::vector<std::size_t>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

std::size_t JunctionTree::max_clique_size() const {
  std::size_t best = 0;
  for (const auto& c : cliques) best = std::max(best, c.size());
  return best;
}

std::size_t JunctionTree::find_covering_clique(
    const std::vector<std::size_t>& attrs) const {
  for (std::size_t i = 0; i < cliques.size(); ++i) {
    if (is_subset(attrs, cliques[i])) return i;
  }
  return npos;
}

bool is_chordal(const std::vector<std::vector<bool>>& adjacency) {
  const std::size_t n = adjacency.size();
  if (n == 0) return true;

  // Maximum cardinality search: repeatedly visit the unvisited vertex with
  // the most visited neighbors (ties to the lowest index).
  std::vector<std::size_t> weight(n, 0);
  std::vector<bool> visited(n, false);
  std::vector<std::size_t> order;          // visit sequence
  std::vector<std::size_t> position(n, 0); // inverse of order
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (visited[v]) continue;
      if (best == n || weight[v] > weight[best]) best = v;
    }
    visited[best] = true;
    position[best] = order.size();
    order.push_back(best);
    for (std::size_t u = 0; u < n; ++u) {
      if (!visited[u] && adjacency[best][u]) ++weight[u];
    }
  }

  // Chordal iff for every vertex, its earlier neighbors minus the latest of
  // them are all adjacent to that latest one.
  for (std::size_t idx = 0; idx < n; ++idx) {
    const std::size_t v = order[idx];
    std::size_t parent = n;
    for (std::size_t u = 0; u < n; ++u) {
      if (!adjacency[v][u] || position[u] >= idx) continue;
      if (parent == n || position[u] > position[parent]) parent = u;
    }
    if (parent == n) continue;
    for (std::size_t u = 0; u < n; ++u) {
      if (!adjacency[v][u] || position[u] >= idx || u == parent) continue;
      if (!adjacency[parent][u]) return false;
    }
  }
  return true;
}

JunctionTree build_junction_tree(
    std::size_t n_vars,
    const std::vector<std::vector<std::size_t>>& attr_sets) {
  std::vector<std::set<std::size_t>> adj(n_vars);
  for (const auto& set : attr_sets) {
    for (std::size_t a : set) {
      if (a >= n_vars) throw ArgumentError("attribute index out of range");
      for (std::size_t b : set) {
        if (a != b) adj[a].insert(b);
      }
    }
  }

  // Min-degree elimination; every eliminated vertex contributes the clique
  // {v} + its neighborhood at elimination time. Isolated and unmeasured
  // vertices come out as singletons, so all n_vars are covered.
  std::vector<bool> gone(n_vars, false);
  std::vector<std::vector<std::size_t>> elim_cliques;
  for (std::size_t step = 0; step < n_vars; ++step) {
    std::size_t v = n_vars;
    for (std::size_t u = 0; u < n_vars; ++u) {
      if (gone[u]) continue;
      if (v == n_vars || adj[u].size() < adj[v].size()) v = u;
    }
    std::vector<std::size_t> clique(adj[v].begin(), adj[v].end());
    clique.push_back(v);
    std::sort(clique.begin(), clique.end());
    elim_cliques.push_back(std::move(clique));

    for (std::size_t a : adj[v]) {
      for (std::size_t b : adj[v]) {
        if (a != b) adj[a].insert(b);
      }
    }
    for (std::size_t a : adj[v]) adj[a].erase(v);
    adj[v].clear();
    gone[v] = true;
  }

  // Keep maximal cliques only, first occurrence wins for duplicates.
  JunctionTree tree;
  tree.n_vars = n_vars;
  for (const auto& c : elim_cliques) {
    bool maximal = true;
    for (const auto& other : elim_cliques) {
      if (&other == &c) continue;
      if (c.size() < other.size() && is_subset(c, other)) {
        maximal = false;
        break;
      }
    }
    if (maximal &&
        std::find(tree.cliques.begin(), tree.cliques.end(), c) ==
            tree.cliques.end()) {
      tree.cliques.push_back(c);
    }
  }

  // Maximum-weight spanning forest on separator sizes (Kruskal). Ties take
  // the lexicographically first clique pair, keeping the layout stable.
  struct CandidateEdge {
    std::size_t weight;
    std::size_t u, v;
  };
  std::vector<CandidateEdge> candidates;
  for (std::size_t i = 0; i < tree.cliques.size(); ++i) {
    for (std::size_t j = i + 1; j < tree.cliques.size(); ++j) {
      const auto sep = sorted_intersection(tree.cliques[i], tree.cliques[j]);
      if (!sep.empty()) candidates.push_back({sep.size(), i, j});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const CandidateEdge& a, const CandidateEdge& b) {
                     if (a.weight != b.weight) return a.weight > b.weight;
                     if (a.u != b.u) return a.u < b.u;
                     return a.v < b.v;
                   });

  std::vector<std::size_t> parent(tree.cliques.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  tree.adjacency.assign(tree.cliques.size(), {});
  for (const auto& e : candidates) {
    const std::size_t ru = find(e.u), rv = find(e.v);
    if (ru == rv) continue;
    parent[ru] = rv;
    JunctionTreeEdge edge;
    edge.u = e.u;
    edge.v = e.v;
    edge.separator = sorted_intersection(tree.cliques[e.u], tree.cliques[e.v]);
    tree.adjacency[e.u].push_back(tree.edges.size());
    tree.adjacency[e.v].push_back(tree.edges.size());
    tree.edges.push_back(std::move(edge));
  }

  check_running_intersection(tree);
  return tree;
}

void check_running_intersection(const JunctionTree& tree) {
  for (std::size_t var = 0; var < tree.n_vars; ++var) {
    std::vector<std::size_t> holders;
    for (std::size_t c = 0; c < tree.cliques.size(); ++c) {
      if (std::binary_search(tree.cliques[c].begin(), tree.cliques[c].end(),
                             var))
        holders.push_back(c);
    }
    if (holders.empty())
      throw StructuralError("attribute not covered by any clique");
    if (holders.size() == 1) continue;

    // BFS from one holder over edges whose separator carries the variable.
    std::vector<bool> reached(tree.cliques.size(), false);
    std::vector<std::size_t> stack = {holders[0]};
    reached[holders[0]] = true;
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      for (std::size_t e : tree.adjacency[c]) {
        const auto& edge = tree.edges[e];
        if (!std::binary_search(edge.separator.begin(), edge.separator.end(),
                                var))
          continue;
        const std::size_t other = edge.u == c ? edge.v : edge.u;
        if (!reached[other]) {
          reached[other] = true;
          stack.push_back(other);
        }
      }
    }
    for (std::size_t h : holders) {
      if (!reached[h])
        throw StructuralError(
            "running intersection property violated: cliques sharing an "
            "attribute are not connected through it");
    }
  }
}

}  // namespace dpsynth
