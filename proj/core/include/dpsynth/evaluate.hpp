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

#ifndef DPSYNTH_EVALUATE_HPP_
#define DPSYNTH_EVALUATE_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dpsynth/forest.hpp"
#include "dpsynth/lmm.hpp"
#include "dpsynth/schema.hpp"
#include "dpsynth/stats.hpp"
#include "dpsynth/table.hpp"

namespace dpsynth {

// Fixed evaluation protocol shared by every table in a report.
struct EvalProtocol {
  // Regression-replication target and its predictors.
  std::string target_col;    // outcome for the forest and the mixed model
  std::size_t top_k = 12;    // forest features, chosen on real data only
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
  ForestConfig forest;

  // Mixed-model columns; the lmm section is produced only when all four
  // names exist in the schema.
  std::string group_col;   // random-effect grouping (participant id)
  std::string week_col;    // fixed effect, also the random slope
  std::string gender_col;  // fixed effect, one-hot expanded
  std::string sleep_col;   // within-group centered into a deviation column

  // Marginal-error workload; empty means all 2-way queries.
  Workload workload;
};

// Metrics of one table against the real baseline.
struct TableEval {
  double l1 = 0.0;  // workload errors vs the real table
  double l2 = 0.0;
  double mean_abs_corr_delta = 0.0;
  double max_abs_corr_delta = 0.0;
  double r2 = 0.0;
  bool r2_degenerate = false;
  bool has_lmm = false;
  double lmm_week = 0.0;
  double lmm_tst_dev = 0.0;
  bool lmm_converged = false;
  CorrMatrix corr;  // emitted separately as CSV for plotting
};

struct UtilityReport {
  TableEval real;  // identity comparisons: l1 = l2 = corr delta = 0
  std::vector<std::pair<double, TableEval>> by_epsilon;  // ascending epsilon
};

// Runs the full protocol: each table is split 80/20 with the protocol seed;
// forest features are the top_k columns most rank-correlated with the
// target on the REAL training half only; the real-trained forest scores on
// the real held-out rows, each synthetic forest on its own held-out rows.
// Marginal errors and correlation deltas compare each synthetic table
// against the full real table. Mixed-model coefficients are refit per table
// on decoded values with the sleep column centered within groups.
UtilityReport utility_report(const Table& real,
                             const std::vector<std::pair<double, Table>>& synths,
                             const EvalProtocol& protocol);

// JSON: {"original": {...}, "by_epsilon": {"1": {l1, l2,
// mean_abs_corr_delta, lmm: {week, tst_dev}, r2}, ...}}. The lmm key is
// present only when the protocol columns exist.
std::string utility_report_to_json(const UtilityReport& report);

}  // namespace dpsynth

#endif  // DPSYNTH_EVALUATE_HPP_
