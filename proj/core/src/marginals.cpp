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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dpsynth/error.hpp"

namespace dpsynth {

std::size_t flat_index(const std::vector<std::size_t>& sizes,
                       const std::vector<std::size_t>& codes) {
  std::size_t index = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    index = index * sizes[i] + codes[i];
  }
  return index;
}

void unflatten_index(const std::vector<std::size_t>& sizes, std::size_t flat,
                     std::vector<std::size_t>* codes) {
  codes->resize(sizes.size());
  for (std::size_t i = sizes.size(); i-- > 0;) {
    (*codes)[i] = flat % sizes[i];
    flat /= sizes[i];
  }
}

double Marginal::total() const {
  return std::accumulate(counts.begin(), counts.end(), 0.0);
}

std::vector<double> Marginal::normalized() const {
  std::vector<double> freq(counts);
  const double t = total();
  if (t > 0) {
    for (double& f : freq) f /= t;
  }
  return freq;
}

std::size_t marginal_cells(const Schema& schema,
                           const std::vector<std::size_t>& attrs) {
  std::size_t cells = 1;
  for (std::size_t a : attrs) {
    if (a >= schema.size())
      throw ArgumentError("marginal attribute index out of range");
    const std::size_t size = schema.at(a).total_codes();
    if (cells > kDenseCellCap / size) return kDenseCellCap + 1;  // saturate
    cells *= size;
  }
  return cells;
}

Marginal compute_marginal(const Table& table, std::vector<std::size_t> attrs) {
  if (attrs.empty()) throw ArgumentError("marginal needs at least 1 attribute");
  std::sort(attrs.begin(), attrs.end());
  if (std::adjacent_find(attrs.begin(), attrs.end()) != attrs.end())
    throw ArgumentError("marginal attributes must be distinct");

  Marginal m;
  m.attributes = std::move(attrs);
  m.sizes.reserve(m.attributes.size());
  const std::size_t cells = marginal_cells(table.schema, m.attributes);
  if (cells > kDenseCellCap) {
    std::ostringstream msg;
    msg << "marginal over " << m.attributes.size() << " attributes needs "
        << cells << " cells, above the dense cap " << kDenseCellCap;
    throw ModelError(msg.str());
  }
  for (std::size_t a : m.attributes)
    m.sizes.push_back(table.schema.at(a).total_codes());
  m.counts.assign(cells, 0.0);

  for (const auto& row : table.rows) {
    std::size_t index = 0;
    for (std::size_t i = 0; i < m.attributes.size(); ++i) {
      index = index * m.sizes[i] + row[m.attributes[i]];
    }
    m.counts[index] += 1.0;
  }
  return m;
}

double query_error(const Table& a, const Table& b,
                   const std::vector<std::size_t>& attrs, Norm norm) {
  if (a.n_rows() == 0 || b.n_rows() == 0)
    throw ArgumentError("workload error needs non-empty tables");
  const auto fa = compute_marginal(a, attrs).normalized();
  const auto fb = compute_marginal(b, attrs).normalized();
  if (fa.size() != fb.size())
    throw ArgumentError("tables disagree on marginal domain size");
  double acc = 0.0;
  for (std::size_t i = 0; i < fa.size(); ++i) {
    const double d = fa[i] - fb[i];
    acc += norm == Norm::kL1 ? std::abs(d) : d * d;
  }
  return norm == Norm::kL1 ? acc : std::sqrt(acc);
}

double workload_error(const Workload& workload, const Table& a, const Table& b,
                      Norm norm) {
  if (workload.queries.empty())
    throw ArgumentError("workload error needs at least one query");
  double weighted = 0.0;
  double weight_total = 0.0;
  for (const auto& q : workload.queries) {
    weighted += q.weight * query_error(a, b, q.attributes, norm);
    weight_total += q.weight;
  }
  return weighted / weight_total;
}

double mutual_information(const Marginal& joint) {
  if (joint.attributes.size() != 2)
    throw ArgumentError("mutual information is defined on 2-way joints");
  const double n = joint.total();
  if (!(n > 0)) throw ArgumentError("mutual information of an empty joint");
  const std::size_t rows = joint.sizes[0];
  const std::size_t cols = joint.sizes[1];

  std::vector<double> px(rows, 0.0), py(cols, 0.0);
  for (std::size_t x = 0; x < rows; ++x) {
    for (std::size_t y = 0; y < cols; ++y) {
      const double p = joint.counts[x * cols + y] / n;
      px[x] += p;
      py[y] += p;
    }
  }
  double mi = 0.0;
  for (std::size_t x = 0; x < rows; ++x) {
    for (std::size_t y = 0; y < cols; ++y) {
      const double p = joint.counts[x * cols + y] / n;
      if (p > 0) mi += p * std::log(p / (px[x] * py[y]));
    }
  }
  return std::max(mi, 0.0);  // guard tiny negative rounding
}

double mutual_information(const Table& table, std::size_t i, std::size_t j) {
  return mutual_information(compute_marginal(table, {i, j}));
}

std::vector<std::pair<std::size_t, std::size_t>> max_spanning_tree(
    const Table& table) {
  const std::size_t d = table.n_cols();
  if (d < 2) throw ArgumentError("spanning tree needs at least 2 attributes");

  struct Edge {
    double weight;
    std::size_t i, j;
  };
  std::vector<Edge> edges;
  edges.reserve(d * (d - 1) / 2);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      edges.push_back({mutual_information(table, i, j), i, j});
    }
  }
  // Highest weight first; equal weights resolve to the lexicographically
  // smallest edge so the tree is unique.
  std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });

  std::vector<std::size_t> parent(d);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };

  std::vector<std::pair<std::size_t, std::size_t>> tree;
  for (const Edge& e : edges) {
    const std::size_t ri = find(e.i), rj = find(e.j);
    if (ri == rj) continue;
    parent[ri] = rj;
    tree.emplace_back(e.i, e.j);
    if (tree.size() == d - 1) break;
  }
  std::sort(tree.begin(), tree.end());
  return tree;
}

}  // namespace dpsynth
