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

#ifndef DPSYNTH_FOREST_HPP_
#define DPSYNTH_FOREST_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace dpsynth {

struct ForestConfig {
  std::size_t n_trees = 200;
  std::size_t max_depth = 12;
  std::size_t min_leaf = 5;
  std::size_t mtry = 0;  // 0 means ceil(n_features / 3)
  std::uint64_t seed = 0;
};

// Regression forest of CART trees grown on bootstrap resamples. Splits
// minimize the weighted child squared error over mtry features sampled
// without replacement per node; leaves hold the mean target. Deterministic
// given the seed.
class RandomForest {
 public:
  // rows: n x d feature matrix, row-major. Requires >= 10 rows. A constant
  // target yields a degenerate() forest that predicts the constant.
  static RandomForest fit(const std::vector<std::vector<double>>& rows,
                          const std::vector<double>& target,
                          const ForestConfig& config = {});

  double predict(const std::vector<double>& row) const;
  std::vector<double> predict(
      const std::vector<std::vector<double>>& rows) const;

  bool degenerate() const { return degenerate_; }
  std::size_t n_trees() const { return trees_.size(); }

 private:
  struct Node {
    // leaf when feature == npos
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t feature = npos;
    double split = 0.0;       // go left when value <= split
    double value = 0.0;       // leaf prediction
    std::size_t left = 0;
    std::size_t right = 0;
  };
  struct Tree {
    std::vector<Node> nodes;  // node 0 is the root
  };

  double predict_tree(const Tree& tree, const std::vector<double>& row) const;

  std::vector<Tree> trees_;
  std::size_t n_features_ = 0;
  bool degenerate_ = false;
  double constant_value_ = 0.0;
};

}  // namespace dpsynth

#endif  // DPSYNTH_FOREST_HPP_
