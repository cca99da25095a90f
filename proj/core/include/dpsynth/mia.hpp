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

#ifndef DPSYNTH_MIA_HPP_
#define DPSYNTH_MIA_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "dpsynth/roc.hpp"
#include "dpsynth/table.hpp"

namespace dpsynth {

enum class DistanceMetric { kHamming, kEuclidean };

// Distance from a code vector to its closest row of the table.
// Hamming counts differing columns. Euclidean first min-max scales every
// column to [0, 1] over the ranges observed across the table plus the
// record itself (a single-valued column contributes 0), then takes the
// usual L2 distance. Empty table -> ArgumentError.
double nearest_record_distance(const std::vector<std::size_t>& record,
                               const Table& table, DistanceMetric metric);

struct MiaConfig {
  DistanceMetric metric = DistanceMetric::kEuclidean;
  std::size_t n_draws = 100;     // must be even: half "in", half "out"
  double calib_fraction = 0.5;   // share of real rows the attacker holds
  std::size_t synth_size = 0;    // 0 means match each training set's size
  std::uint64_t seed = 0;

  void validate() const;  // throws ConfigError
};

// Produces one synthetic table from a training table; the seed makes every
// trial independent and reproducible. Production code binds the private
// synthesizer here; tests substitute degenerate or deliberately leaky
// generators.
using SyntheticGenerator =
    std::function<Table(const Table& training, std::uint64_t seed)>;

struct MiaResult {
  std::vector<double> in_scores;   // target's nearest-record distances when
                                   // it was in the training data
  std::vector<double> out_scores;  // and when it was not
  RocCurve roc;
  double auc = 0.0;
  double threshold = 0.0;  // Youden point of the curve
  bool decision = false;   // final fresh draw classified "in"?
};

// Closest-distance membership inference with shadow calibration.
//
// The attacker samples calib_fraction of `real` (the target row must not be
// in `real`; callers pass the table with it removed). For n_draws/2 trials
// the generator trains on calibration + target ("in" worlds) and for
// n_draws/2 on calibration alone ("out" worlds), each trial with a fresh
// seed derived from cfg.seed. Each trial scores the target's distance to
// the nearest synthetic record; the ROC over the two score sets yields the
// Youden threshold, and one final fresh "in" draw is classified by
// distance <= threshold. Fixed seeds reproduce the curve bit for bit.
MiaResult run_mia(const std::vector<std::size_t>& target, const Table& real,
                  const MiaConfig& cfg, const SyntheticGenerator& generator);

}  // namespace dpsynth

#endif  // DPSYNTH_MIA_HPP_
