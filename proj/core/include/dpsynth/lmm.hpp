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

#ifndef DPSYNTH_LMM_HPP_
#define DPSYNTH_LMM_HPP_

#include <cstddef>
#include <string>
#include <vector>

namespace dpsynth {

// Column-oriented numeric data used by the regression metrics (decoded
// tables land here).
struct NumericFrame {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;

  std::size_t n_rows() const { return columns.empty() ? 0 : columns[0].size(); }
  const std::vector<double>& column(const std::string& name) const;
  bool has_column(const std::string& name) const;
};

struct RegressionSpec {
  std::string outcome;
  std::vector<std::string> fixed_effects;
  std::string group_col;
  std::string random_slope;  // empty means random intercepts only

  // Fixed-effect columns listed here are expanded to one-hot indicators
  // against their first observed value as reference.
  std::vector<std::string> categorical_fixed;
};

struct LmmOptions {
  double tolerance = 1e-8;  // max absolute coefficient change
  std::size_t max_iterations = 1000;
  // Pins both random-effect variances at 0, reducing the fit to ordinary
  // least squares; exists to make the degenerate-case contract testable.
  bool force_zero_random_variance = false;
};

struct LmmFit {
  std::vector<std::string> coefficient_names;  // "(intercept)" first
  std::vector<double> coefficients;
  std::vector<double> standard_errors;
  double intercept_var = 0.0;
  double slope_var = 0.0;
  double residual_var = 0.0;
  bool converged = false;
  std::size_t n_iterations = 0;

  double coefficient(const std::string& name) const;
  double standard_error(const std::string& name) const;
};

// Gaussian linear mixed model with per-group random intercepts and an
// optional random slope, fit by expectation-maximization on the marginal
// likelihood. Iterates until the largest coefficient change drops below
// options.tolerance or max_iterations is reached (converged=false then,
// fit still returned). Standard errors come from the GLS information matrix
// at the final variance estimates. A rank-deficient fixed-effect design
// raises ArgumentError naming the collinear columns.
LmmFit fit_lmm(const NumericFrame& data, const RegressionSpec& spec,
               const LmmOptions& options = {});

}  // namespace dpsynth

#endif  // DPSYNTH_LMM_HPP_
