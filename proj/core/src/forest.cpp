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

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "dpsynth/error.hpp"
#include "dpsynth/rng.hpp"

namespace dpsynth {
namespace {

struct Builder {
  const std::vector<std::vector<double>>& rows;
  const std::vector<double>& target;
  std::size_t max_depth;
  std::size_t min_leaf;
  std::size_t mtry;
  Rng& rng;
  std::vector<std::size_t> features;  // scratch for per-node sampling
  std::vector<std::size_t> order;     // scratch for per-feature sorting
};

double mean_target(const Builder& b, const std::vector<std::size_t>& idx) {
  double sum = 0.0;
  for (const std::size_t i : idx) sum += b.target[i];
  return sum / static_cast<double>(idx.size());
}

// Returns true and fills (feature, split, sse) when some sampled feature
// admits a split leaving >= min_leaf samples on each side.
bool best_split(Builder& b, const std::vector<std::size_t>& idx,
                std::size_t* feature, double* split, double* best_sse) {
  const std::size_t m = idx.size();
  const std::size_t d = b.rows.front().size();
  // Partial Fisher-Yates: the first mtry entries become the sampled features.
  std::iota(b.features.begin(), b.features.end(), 0);
  for (std::size_t i = 0; i < b.mtry; ++i) {
    const std::size_t j = i + b.rng.uniform_index(d - i);
    std::swap(b.features[i], b.features[j]);
  }

  bool found = false;
  *best_sse = std::numeric_limits<double>::infinity();
  for (std::size_t fi = 0; fi < b.mtry; ++fi) {
    const std::size_t f = b.features[fi];
    b.order = idx;
    std::sort(b.order.begin(), b.order.end(),
              [&](std::size_t a, std::size_t c) {
                const double va = b.rows[a][f];
                const double vc = b.rows[c][f];
                if (va != vc) return va < vc;
                return a < c;
              });
    double left_sum = 0.0, left_sq = 0.0;
    double total_sum = 0.0, total_sq = 0.0;
    for (const std::size_t i : b.order) {
      total_sum += b.target[i];
      total_sq += b.target[i] * b.target[i];
    }
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const double y = b.target[b.order[i]];
      left_sum += y;
      left_sq += y * y;
      const std::size_t n_left = i + 1;
      const std::size_t n_right = m - n_left;
      if (n_left < b.min_leaf || n_right < b.min_leaf) continue;
      const double v = b.rows[b.order[i]][f];
      const double v_next = b.rows[b.order[i + 1]][f];
      if (v == v_next) continue;  // split only between distinct values
      const double right_sum = total_sum - left_sum;
      const double right_sq = total_sq - left_sq;
      const double sse =
          (left_sq - left_sum * left_sum / static_cast<double>(n_left)) +
          (right_sq - right_sum * right_sum / static_cast<double>(n_right));
      if (sse < *best_sse) {
        *best_sse = sse;
        *feature = f;
        *split = v + (v_next - v) / 2.0;
        found = true;
      }
    }
  }
  return found;
}

}  // namespace

RandomForest RandomForest::fit(const std::vector<std::vector<double>>& rows,
                               const std::vector<double>& target,
                               const ForestConfig& config) {
  if (rows.size() < 10)
    throw ArgumentError("random forest needs at least 10 rows");
  if (rows.size() != target.size())
    throw ArgumentError("feature/target row counts differ");
  const std::size_t d = rows.front().size();
  if (d == 0) throw ArgumentError("random forest needs features");
  for (const auto& row : rows)
    if (row.size() != d) throw ArgumentError("ragged feature matrix");
  if (config.n_trees == 0 || config.max_depth == 0 || config.min_leaf == 0)
    throw ArgumentError("forest sizes must be positive");
  const std::size_t mtry =
      config.mtry != 0 ? config.mtry : (d + 2) / 3;
  if (mtry > d) throw ArgumentError("mtry exceeds the feature count");

  RandomForest forest;
  forest.n_features_ = d;
  if (std::all_of(target.begin(), target.end(),
                  [&](double y) { return y == target.front(); })) {
    forest.degenerate_ = true;
    forest.constant_value_ = target.front();
    return forest;
  }

  const std::size_t n = rows.size();
  for (std::size_t t = 0; t < config.n_trees; ++t) {
    Rng rng(mix_seed(config.seed, t));
    std::vector<std::size_t> sample(n);
    for (auto& s : sample) s = rng.uniform_index(n);

    Builder builder{rows,        target, config.max_depth, config.min_leaf,
                    mtry,        rng,    std::vector<std::size_t>(d),
                    std::vector<std::size_t>()};
    Tree tree;
    // Recursive lambda; depth is bounded by max_depth.
    const std::function<std::size_t(std::vector<std::size_t>, std::size_t)>
        build = [&](std::vector<std::size_t> idx,
                    std::size_t depth) -> std::size_t {
      const std::size_t self = tree.nodes.size();
      tree.nodes.emplace_back();
      tree.nodes[self].value = mean_target(builder, idx);

      const bool splittable =
          depth < builder.max_depth && idx.size() >= 2 * builder.min_leaf;
      std::size_t feature = 0;
      double split = 0.0;
      double sse = 0.0;
      if (!splittable || !best_split(builder, idx, &feature, &split, &sse))
        return self;

      std::vector<std::size_t> left_idx, right_idx;
      for (const std::size_t i : idx)
        (rows[i][feature] <= split ? left_idx : right_idx).push_back(i);
      idx.clear();
      idx.shrink_to_fit();
      const std::size_t left = build(std::move(left_idx), depth + 1);
      const std::size_t right = build(std::move(right_idx), depth + 1);
      tree.nodes[self].feature = feature;
      tree.nodes[self].split = split;
      tree.nodes[self].left = left;
      tree.nodes[self].right = right;
      return self;
    };
    build(std::move(sample), 0);
    forest.trees_.push_back(std::move(tree));
  }
  return forest;
}

double RandomForest::predict_tree(const Tree& tree,
                                  const std::vector<double>& row) const {
  std::size_t at = 0;
  while (tree.nodes[at].feature != Node::npos) {
    const Node& node = tree.nodes[at];
    at = row[node.feature] <= node.split ? node.left : node.right;
  }
  return tree.nodes[at].value;
}

double RandomForest::predict(const std::vector<double>& row) const {
  if (row.size() != n_features_)
    throw ArgumentError("predict row width differs from the training data");
  if (degenerate_) return constant_value_;
  if (trees_.empty()) throw ArgumentError("predict on an unfitted forest");
  double sum = 0.0;
  for (const Tree& tree : trees_) sum += predict_tree(tree, row);
  return sum / static_cast<double>(trees_.size());
}

std::vector<double> RandomForest::predict(
    const std::vector<std::vector<double>>& rows) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(predict(row));
  return out;
}

}  // namespace dpsynth
