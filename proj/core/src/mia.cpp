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

#include "dpsynth/mia.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dpsynth/error.hpp"
#include "dpsynth/rng.hpp"

namespace dpsynth {

double nearest_record_distance(const std::vector<std::size_t>& record,
                               const Table& table, DistanceMetric metric) {
  if (table.rows.empty())
    throw ArgumentError("nearest_record_distance needs a non-empty table");
  const std::size_t d = record.size();
  if (d != table.schema.size())
    throw ArgumentError("record width does not match the table");

  if (metric == DistanceMetric::kHamming) {
    std::size_t best = d + 1;
    for (const auto& row : table.rows) {
      std::size_t differing = 0;
      for (std::size_t j = 0; j < d && differing < best; ++j)
        differing += row[j] != record[j];
      best = std::min(best, differing);
      if (best == 0) break;
    }
    return static_cast<double>(best);
  }

  // Min-max scale every column over the table's rows plus the record, so a
  // wide-domain column cannot dominate the metric by unit choice alone.
  std::vector<double> lo(d), hi(d);
  for (std::size_t j = 0; j < d; ++j)
    lo[j] = hi[j] = static_cast<double>(record[j]);
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < d; ++j) {
      const auto v = static_cast<double>(row[j]);
      lo[j] = std::min(lo[j], v);
      hi[j] = std::max(hi[j], v);
    }
  }
  std::vector<double> scaled_record(d);
  std::vector<double> inv_range(d);
  for (std::size_t j = 0; j < d; ++j) {
    inv_range[j] = hi[j] > lo[j] ? 1.0 / (hi[j] - lo[j]) : 0.0;
    scaled_record[j] = (static_cast<double>(record[j]) - lo[j]) * inv_range[j];
  }

  double best_sq = std::numeric_limits<double>::infinity();
  for (const auto& row : table.rows) {
    double sq = 0.0;
    for (std::size_t j = 0; j < d && sq < best_sq; ++j) {
      const double delta =
          (static_cast<double>(row[j]) - lo[j]) * inv_range[j] -
          scaled_record[j];
      sq += delta * delta;
    }
    best_sq = std::min(best_sq, sq);
    if (best_sq == 0.0) break;
  }
  return std::sqrt(best_sq);
}

void MiaConfig::validate() const {
  if (n_draws < 2 || n_draws % 2 != 0)
    throw ConfigError("n_draws must be even and at least 2");
  if (!(calib_fraction > 0) || !(calib_fraction < 1))
    throw ConfigError("calib_fraction must be in (0, 1)");
}

MiaResult run_mia(const std::vector<std::size_t>& target, const Table& real,
                  const MiaConfig& cfg, const SyntheticGenerator& generator) {
  cfg.validate();
  real.validate();
  if (target.size() != real.schema.size())
    throw ArgumentError("target record width does not match the table");
  if (!generator) throw ArgumentError("run_mia needs a generator");

  const auto [rest, calibration] =
      split_rows(real, cfg.calib_fraction, mix_seed(cfg.seed, 0));
  (void)rest;
  if (calibration.rows.empty())
    throw ArgumentError("calibration sample is empty; need more real rows");

  // Training copies carry no row ids: ids are opaque and the target row has
  // none to contribute.
  Table world_out;
  world_out.schema = real.schema;
  world_out.rows = calibration.rows;
  Table world_in = world_out;
  world_in.rows.push_back(target);

  MiaResult result;
  const std::size_t per_side = cfg.n_draws / 2;
  for (std::size_t t = 0; t < cfg.n_draws; ++t) {
    const bool in_world = t < per_side;
    const Table synth =
        generator(in_world ? world_in : world_out, mix_seed(cfg.seed, 1 + t));
    const double score = nearest_record_distance(target, synth, cfg.metric);
    (in_world ? result.in_scores : result.out_scores).push_back(score);
  }

  result.roc = roc_curve(result.in_scores, result.out_scores);
  result.auc = result.roc.auc;
  result.threshold = youden_threshold(result.roc);

  const Table final_synth =
      generator(world_in, mix_seed(cfg.seed, 1 + cfg.n_draws));
  const double final_score =
      nearest_record_distance(target, final_synth, cfg.metric);
  result.decision = final_score <= result.threshold;
  return result;
}

}  // namespace dpsynth
