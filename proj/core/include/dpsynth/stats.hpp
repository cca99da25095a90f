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

#ifndef DPSYNTH_STATS_HPP_
#define DPSYNTH_STATS_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "dpsynth/table.hpp"

namespace dpsynth {

// Midrank ranks, 1-based: ties receive the mean of the rank positions they
// cover, e.g. [5, 5, 9] -> [1.5, 1.5, 3].
std::vector<double> rank_with_ties(const std::vector<double>& values);

// Pearson correlation; either vector constant -> 0.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

// Spearman rank correlation = Pearson of midranks. `degenerate` is set when
// either input is constant (the correlation is then reported as 0).
struct SpearmanResult {
  double rho = 0.0;
  bool degenerate = false;
};
SpearmanResult spearman(const std::vector<double>& x,
                        const std::vector<double>& y);

// Symmetric correlation matrix with unit diagonal. degenerate[i][j] marks
// pairs where a constant column forced the 0 entry.
struct CorrMatrix {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> values;
  std::vector<std::vector<bool>> degenerate;
};

// Spearman matrix over the listed columns (all columns when empty), using
// the encoded codes directly; binning is monotone, so ranks are unaffected.
// Requires >= 3 rows.
CorrMatrix spearman_matrix(const Table& table,
                           const std::vector<std::string>& columns = {});

// Same structure over plain numeric columns, used after decoding.
CorrMatrix spearman_matrix(const std::vector<std::string>& names,
                           const std::vector<std::vector<double>>& columns);

struct CorrDelta {
  std::vector<std::vector<double>> delta;  // synth - real, full matrix
  double mean_abs_delta = 0.0;             // over off-diagonal upper triangle
  double max_abs_delta = 0.0;
};

// Elementwise difference of two correlation matrices over the same columns;
// summary statistics cover the C(d, 2) off-diagonal entries.
CorrDelta corr_preservation(const CorrMatrix& real, const CorrMatrix& synth);

// values[i] minus the mean of values over rows with the same group id;
// singleton groups get 0.
std::vector<double> center_within_group(const std::vector<double>& values,
                                        const std::vector<double>& groups);

// Indices of the k columns most correlated (|Spearman|) with target_col,
// target excluded, ties resolved to the lower column index. Requires
// k < number of columns.
std::vector<std::size_t> top_k_correlated_features(const Table& table,
                                                   std::size_t target_col,
                                                   std::size_t k);

// 1 - SS_res / SS_tot. Not clipped at zero: a model worse than the mean
// predictor reports a negative score. Constant `actual` -> ArgumentError.
double r2_score(const std::vector<double>& predicted,
                const std::vector<double>& actual);

// CSV form of a correlation matrix: header "column,<names...>", one labeled
// row per column, values via the shortest-round-trip formatter.
std::string corr_matrix_to_csv(const CorrMatrix& m);

}  // namespace dpsynth

#endif  // DPSYNTH_STATS_HPP_
