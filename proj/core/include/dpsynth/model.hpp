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

#ifndef DPSYNTH_MODEL_HPP_
#define DPSYNTH_MODEL_HPP_

#include <cstddef>
#include <vector>

#include "dpsynth/factor.hpp"
#include "dpsynth/junction_tree.hpp"
#include "dpsynth/marginals.hpp"
#include "dpsynth/rng.hpp"
#include "dpsynth/schema.hpp"
#include "dpsynth/table.hpp"

namespace dpsynth {

// One noisy marginal observation produced by a private mechanism.
struct Measurement {
  std::vector<std::size_t> attributes;  // strictly increasing
  std::vector<double> noisy_counts;     // dense, last attribute fastest
  double sigma = 0.0;                   // std of the additive noise
};

struct FitOptions {
  double tolerance = 1e-6;   // max normalized L1 gap across measurements
  std::size_t max_sweeps = 500;
};

// Distribution over full rows estimated from noisy marginals: a junction
// tree whose calibrated clique beliefs are iteratively rescaled toward the
// measured marginals (iterative proportional fitting in count space).
// Beliefs sum to total_count; adjacent beliefs agree on separators.
class GraphicalModel {
 public:
  const Schema& schema() const { return schema_; }
  const JunctionTree& tree() const { return tree_; }
  double total_count() const { return total_count_; }
  const std::vector<Factor>& beliefs() const { return beliefs_; }

  // Expected counts over any attribute set. Sets inside a clique read off
  // the calibrated belief; others run variable elimination (min-degree
  // order) over the clique conditionals. Throws ModelError if an
  // intermediate table would exceed kDenseCellCap cells.
  Marginal marginal(std::vector<std::size_t> attrs) const;

  // Draws n_rows complete rows by ancestral sampling: each tree component
  // is sampled root-first, children conditioned on their separator codes.
  Table sample(std::size_t n_rows, Rng& rng) const;

  friend GraphicalModel fit_model(const Schema& schema,
                                  const std::vector<Measurement>& measurements,
                                  double total_count,
                                  const FitOptions& options);

 private:
  Schema schema_;
  JunctionTree tree_;
  std::vector<Factor> beliefs_;     // one per clique, pairwise calibrated
  std::vector<Factor> separators_;  // one per tree edge
  double total_count_ = 0.0;
};

// Fits the model. Measurements over the same attribute set are first merged
// by inverse-variance weighting; negative merged counts are floored at zero
// before being used as scaling targets (a frequency table cannot be
// negative). total_count sets the overall mass and must be positive.
GraphicalModel fit_model(const Schema& schema,
                         const std::vector<Measurement>& measurements,
                         double total_count, const FitOptions& options = {});

}  // namespace dpsynth

#endif  // DPSYNTH_MODEL_HPP_
