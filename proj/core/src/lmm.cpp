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

#include "dpsynth/lmm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "dpsynth/csv.hpp"
#include "dpsynth/error.hpp"

namespace dpsynth {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Design {
  std::vector<std::string> names;  // "(intercept)" first
  MatrixXd x;
  VectorXd y;
  VectorXd slope;   // random-slope column (unused when !has_slope)
  bool has_slope = false;
  std::vector<double> groups;  // group key per row
};

Design build_design(const NumericFrame& data, const RegressionSpec& spec) {
  if (spec.outcome.empty()) throw ArgumentError("regression needs an outcome");
  if (std::find(spec.fixed_effects.begin(), spec.fixed_effects.end(),
                spec.outcome) != spec.fixed_effects.end())
    throw ArgumentError("outcome \"" + spec.outcome +
                        "\" cannot also be a fixed effect");
  for (const auto& name : spec.categorical_fixed) {
    if (std::find(spec.fixed_effects.begin(), spec.fixed_effects.end(),
                  name) == spec.fixed_effects.end())
      throw ArgumentError("categorical column \"" + name +
                          "\" is not among the fixed effects");
  }

  const std::vector<double>& y = data.column(spec.outcome);
  const std::size_t n = y.size();
  if (n == 0) throw ArgumentError("regression needs rows");

  Design design;
  design.names.push_back("(intercept)");
  std::vector<const std::vector<double>*> numeric_cols;
  // Expanded design: intercept, then each fixed effect in order, categorical
  // ones as one-hot indicators against their first observed value.
  struct ColumnPlan {
    const std::vector<double>* source = nullptr;
    bool indicator = false;
    double level = 0.0;
  };
  std::vector<ColumnPlan> plan;
  for (const auto& name : spec.fixed_effects) {
    const std::vector<double>& col = data.column(name);
    const bool categorical =
        std::find(spec.categorical_fixed.begin(), spec.categorical_fixed.end(),
                  name) != spec.categorical_fixed.end();
    if (!categorical) {
      design.names.push_back(name);
      plan.push_back({&col, false, 0.0});
      continue;
    }
    const double reference = col.front();
    std::set<double> levels(col.begin(), col.end());
    levels.erase(reference);
    for (const double level : levels) {
      design.names.push_back(name + "=" + format_double(level));
      plan.push_back({&col, true, level});
    }
  }

  const std::size_t p = design.names.size();
  if (n <= p)
    throw ArgumentError("regression needs more rows than coefficients");
  design.x.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  design.y.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    design.x(static_cast<Eigen::Index>(i), 0) = 1.0;
    design.y(static_cast<Eigen::Index>(i)) = y[i];
    for (std::size_t c = 0; c < plan.size(); ++c) {
      const double raw = (*plan[c].source)[i];
      design.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c + 1)) =
          plan[c].indicator ? (raw == plan[c].level ? 1.0 : 0.0) : raw;
    }
  }

  design.groups = data.column(spec.group_col);
  if (!spec.random_slope.empty()) {
    const std::vector<double>& slope = data.column(spec.random_slope);
    design.slope.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
      design.slope(static_cast<Eigen::Index>(i)) = slope[i];
    design.has_slope = true;
  }
  return design;
}

// Throws when X is rank deficient, naming the columns the pivoted QR
// discards. Returns the QR so callers can reuse it for the OLS solve.
Eigen::ColPivHouseholderQR<MatrixXd> check_rank(
    const MatrixXd& x, const std::vector<std::string>& names) {
  Eigen::ColPivHouseholderQR<MatrixXd> qr(x);
  const auto rank = qr.rank();
  if (rank < x.cols()) {
    const auto& perm = qr.colsPermutation().indices();
    std::ostringstream msg;
    msg << "singular fixed-effect design; collinear columns:";
    for (Eigen::Index i = rank; i < x.cols(); ++i)
      msg << " \"" << names[static_cast<std::size_t>(perm(i))] << "\"";
    throw ArgumentError(msg.str());
  }
  return qr;
}

struct Group {
  MatrixXd x;
  MatrixXd z;
  VectorXd y;
};

std::vector<Group> split_groups(const Design& design) {
  std::map<double, std::vector<Eigen::Index>> by_key;
  for (Eigen::Index i = 0; i < design.y.size(); ++i)
    by_key[design.groups[static_cast<std::size_t>(i)]].push_back(i);
  if (by_key.size() < 2)
    throw ArgumentError("mixed model needs at least 2 groups");
  bool some_repeat = false;
  std::vector<Group> groups;
  const Eigen::Index q = design.has_slope ? 2 : 1;
  for (const auto& [key, rows] : by_key) {
    (void)key;
    Group g;
    const auto m = static_cast<Eigen::Index>(rows.size());
    some_repeat |= m >= 2;
    g.x.resize(m, design.x.cols());
    g.z.resize(m, q);
    g.y.resize(m);
    for (Eigen::Index r = 0; r < m; ++r) {
      g.x.row(r) = design.x.row(rows[static_cast<std::size_t>(r)]);
      g.y(r) = design.y(rows[static_cast<std::size_t>(r)]);
      g.z(r, 0) = 1.0;
      if (design.has_slope) g.z(r, 1) = design.slope(rows[static_cast<std::size_t>(r)]);
    }
    groups.push_back(std::move(g));
  }
  if (!some_repeat)
    throw ArgumentError(
        "mixed model needs repeated observations in some group");
  return groups;
}

}  // namespace

const std::vector<double>& NumericFrame::column(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return columns[i];
  throw ArgumentError("no column named \"" + name + "\"");
}

bool NumericFrame::has_column(const std::string& name) const {
  return std::find(names.begin(), names.end(), name) != names.end();
}

double LmmFit::coefficient(const std::string& name) const {
  for (std::size_t i = 0; i < coefficient_names.size(); ++i)
    if (coefficient_names[i] == name) return coefficients[i];
  throw ArgumentError("no coefficient named \"" + name + "\"");
}

double LmmFit::standard_error(const std::string& name) const {
  for (std::size_t i = 0; i < coefficient_names.size(); ++i)
    if (coefficient_names[i] == name) return standard_errors[i];
  throw ArgumentError("no coefficient named \"" + name + "\"");
}

LmmFit fit_lmm(const NumericFrame& data, const RegressionSpec& spec,
               const LmmOptions& options) {
  const Design design = build_design(data, spec);
  const auto qr = check_rank(design.x, design.names);
  const auto n = design.y.size();
  const auto p = design.x.cols();

  LmmFit fit;
  fit.coefficient_names = design.names;

  VectorXd beta = qr.solve(design.y);
  const double rss = (design.y - design.x * beta).squaredNorm();

  if (options.force_zero_random_variance) {
    fit.residual_var = rss / static_cast<double>(n - p);
    const MatrixXd xtx_inv =
        (design.x.transpose() * design.x)
            .ldlt()
            .solve(MatrixXd::Identity(p, p));
    fit.coefficients.assign(beta.data(), beta.data() + p);
    for (Eigen::Index j = 0; j < p; ++j)
      fit.standard_errors.push_back(std::sqrt(fit.residual_var * xtx_inv(j, j)));
    fit.converged = true;
    return fit;
  }

  const std::vector<Group> groups = split_groups(design);
  const Eigen::Index q = design.has_slope ? 2 : 1;
  const double y_var =
      (design.y.array() - design.y.mean()).square().sum() /
      static_cast<double>(n);
  const double floor = std::max(y_var, 1.0) * 1e-12;

  double sigma2 = std::max(rss / static_cast<double>(n), floor);
  VectorXd tau = VectorXd::Constant(q, sigma2);

  // Each iteration: GLS for beta at the current variances, then the EM
  // update of the variance components from the random-effect posteriors.
  // V_g^{-1} is applied through the q x q matrix (I + W'W)^{-1} with
  // W = Z diag(sqrt(tau)) / sigma, which stays well defined at tau = 0.
  const auto make_solver = [&](const Group& g, MatrixXd* w_out,
                               Eigen::LDLT<MatrixXd>* m_out) {
    MatrixXd w = g.z;
    for (Eigen::Index j = 0; j < q; ++j)
      w.col(j) *= std::sqrt(tau(j) / sigma2);
    m_out->compute(MatrixXd::Identity(q, q) + w.transpose() * w);
    *w_out = std::move(w);
  };
  const auto apply_vinv = [&](const MatrixXd& w,
                              const Eigen::LDLT<MatrixXd>& m,
                              const MatrixXd& a) -> MatrixXd {
    return (a - w * m.solve(w.transpose() * a)) / sigma2;
  };

  for (std::size_t iter = 1; iter <= options.max_iterations; ++iter) {
    fit.n_iterations = iter;
    MatrixXd info = MatrixXd::Zero(p, p);
    VectorXd rhs = VectorXd::Zero(p);
    std::vector<MatrixXd> ws(groups.size());
    std::vector<Eigen::LDLT<MatrixXd>> ms(groups.size());
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const Group& g = groups[gi];
      make_solver(g, &ws[gi], &ms[gi]);
      const MatrixXd vinv_x = apply_vinv(ws[gi], ms[gi], g.x);
      info += g.x.transpose() * vinv_x;
      rhs += vinv_x.transpose() * g.y;
    }
    const VectorXd beta_new = info.ldlt().solve(rhs);
    const double delta = (beta_new - beta).cwiseAbs().maxCoeff();
    beta = beta_new;

    VectorXd tau_acc = VectorXd::Zero(q);
    double sigma_acc = 0.0;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const Group& g = groups[gi];
      const VectorXd r = g.y - g.x * beta;
      const VectorXd vinv_r = apply_vinv(ws[gi], ms[gi], r);
      const MatrixXd psi_zt = tau.asDiagonal() * g.z.transpose();  // q x m
      const VectorXd bhat = psi_zt * vinv_r;
      const MatrixXd cg =
          MatrixXd(tau.asDiagonal()) -
          psi_zt * apply_vinv(ws[gi], ms[gi], psi_zt.transpose());
      for (Eigen::Index j = 0; j < q; ++j)
        tau_acc(j) += bhat(j) * bhat(j) + cg(j, j);
      const VectorXd resid = r - g.z * bhat;
      sigma_acc += resid.squaredNorm() +
                   ((g.z * cg).cwiseProduct(g.z)).sum();
    }
    tau = tau_acc / static_cast<double>(groups.size());
    sigma2 = std::max(sigma_acc / static_cast<double>(n), floor);

    if (delta < options.tolerance) {
      fit.converged = true;
      break;
    }
  }

  // Standard errors from the GLS information matrix at the final variances.
  MatrixXd info = MatrixXd::Zero(p, p);
  for (const Group& g : groups) {
    MatrixXd w;
    Eigen::LDLT<MatrixXd> m;
    make_solver(g, &w, &m);
    info += g.x.transpose() * apply_vinv(w, m, g.x);
  }
  const MatrixXd cov = info.ldlt().solve(MatrixXd::Identity(p, p));

  fit.coefficients.assign(beta.data(), beta.data() + p);
  for (Eigen::Index j = 0; j < p; ++j)
    fit.standard_errors.push_back(std::sqrt(std::max(cov(j, j), 0.0)));
  fit.intercept_var = tau(0);
  fit.slope_var = design.has_slope ? tau(1) : 0.0;
  fit.residual_var = sigma2;
  return fit;
}

}  // namespace dpsynth
