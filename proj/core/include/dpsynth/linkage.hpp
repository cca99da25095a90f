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

#ifndef DPSYNTH_LINKAGE_HPP_
#define DPSYNTH_LINKAGE_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "dpsynth/table.hpp"

namespace dpsynth {

// Piecewise-linear similarity of two numeric values: with d = |a - b|,
// returns 1 when d <= offset, otherwise max(0, 1 - (d - offset) / scale).
// So a difference of 0.4 scores 1.0 under offset 0.5, a difference of 1.0
// scores 2/3 under (0.5, 1.5), and a difference of 2.0 scores 0.
double linear_similarity(double a, double b, double offset, double scale);

struct LinkageConfig {
  std::vector<std::string> exact_cols;  // blocking columns, equality required
  std::string numeric_col;              // scored with linear_similarity
  double offset = 0.5;
  double scale = 1.5;
  // Accepted for config compatibility; the similarity above depends only on
  // the value difference, so origin has no effect.
  double origin = 0.0;
  double sim_threshold = 0.8;

  void validate() const;  // throws ConfigError
};

struct MatchPair {
  std::size_t target_row = 0;
  std::size_t aux_row = 0;
  std::string target_row_id;  // row index as string when ids are absent
  std::string aux_row_id;
  double similarity = 0.0;
};

// pairs are sorted by similarity descending, ties by (target_row, aux_row);
// every pair agrees exactly on all exact_cols and scores >= sim_threshold.
struct MatchResult {
  std::vector<MatchPair> pairs;
  std::size_t pairs_blocked = 0;  // cross-product pairs passing the block
};

// Re-identification by join: candidate pairs are the target x aux cross
// product blocked on exact_cols equality (numeric cells compare by value,
// non-numeric by exact string), then kept when the similarity of numeric_col
// clears the threshold. Missing cells never match. Both tables must contain
// all configured columns; otherwise ConfigError.
MatchResult linkage_attack(const RawTable& target, const RawTable& aux,
                           const LinkageConfig& cfg);

// Serialized MatchResult: {"pairs": [{target_row, aux_row, target_row_id,
// aux_row_id, similarity}], "pairs_blocked": n}.
std::string match_result_to_json(const MatchResult& result);

}  // namespace dpsynth

#endif  // DPSYNTH_LINKAGE_HPP_
