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

#include "dpsynth/evaluate.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "dpsynth/csv.hpp"
#include "dpsynth/error.hpp"
#include "dpsynth/marginals.hpp"

namespace dpsynth {
namespace {

std::size_t required_index(const Schema& schema, const std::string& name) {
  const auto index = schema.index_of(name);
  if (!index) throw ArgumentError("no column named \"" + name + "\"");
  return *index;
}

std::vector<double> numeric_column(const Table& table, std::size_t col) {
  const AttributeSpec& attr = table.schema.at(col);
  std::vector<double> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows)
    out.push_back(attribute_numeric_value(attr, row[col]));
  return out;
}

void check_same_schema(const Schema& a, const Schema& b) {
  if (a.size() != b.size())
    throw ArgumentError("tables have different schemas");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.at(i).name != b.at(i).name ||
        a.at(i).total_codes() != b.at(i).total_codes())
      throw ArgumentError("tables have different schemas (column \"" +
                          a.at(i).name + "\")");
  }
}

// Forest leg of the protocol: split, train on the table's own training
// half over the pre-selected features, score on the table's own holdout.
void forest_eval(const Table& table, const std::vector<std::size_t>& features,
                 std::size_t target, const EvalProtocol& protocol,
                 TableEval* eval) {
  const auto [train, test] =
      split_rows(table, protocol.test_fraction, protocol.seed);
  const auto gather = [&](const Table& part) {
    std::vector<std::vector<double>> xs;
    xs.reserve(part.rows.size());
    for (const auto& row : part.rows) {
      std::vector<double> x;
      x.reserve(features.size());
      for (const std::size_t f : features)
        x.push_back(attribute_numeric_value(part.schema.at(f), row[f]));
      xs.push_back(std::move(x));
    }
    return xs;
  };
  const std::vector<double> train_y = numeric_column(train, target);
  const std::vector<double> test_y = numeric_column(test, target);
  const RandomForest forest =
      RandomForest::fit(gather(train), train_y, protocol.forest);
  try {
    eval->r2 = r2_score(forest.predict(gather(test)), test_y);
  } catch (const ArgumentError&) {
    // Constant holdout target: the score is undefined, not zero.
    eval->r2_degenerate = true;
  }
}

// Mixed-model leg: outcome ~ week + gender + within-group sleep deviation,
// random intercept and week slope per group. A table whose synthetic values
// collapse the design (single group, constant outcome) reports no lmm
// section rather than a fabricated coefficient.
void lmm_eval(const Table& table, const EvalProtocol& protocol,
              TableEval* eval) {
  const Schema& schema = table.schema;
  NumericFrame frame;
  frame.names = {protocol.target_col, protocol.week_col, protocol.gender_col,
                 protocol.group_col};
  for (const auto& name : frame.names)
    frame.columns.push_back(numeric_column(table, required_index(schema, name)));
  frame.names.push_back("tst_dev");
  frame.columns.push_back(center_within_group(
      numeric_column(table, required_index(schema, protocol.sleep_col)),
      frame.columns[3]));

  RegressionSpec spec;
  spec.outcome = protocol.target_col;
  spec.fixed_effects = {protocol.week_col, protocol.gender_col, "tst_dev"};
  spec.group_col = protocol.group_col;
  spec.random_slope = protocol.week_col;
  spec.categorical_fixed = {protocol.gender_col};
  try {
    const LmmFit fit = fit_lmm(frame, spec);
    eval->has_lmm = true;
    eval->lmm_week = fit.coefficient(protocol.week_col);
    eval->lmm_tst_dev = fit.coefficient("tst_dev");
    eval->lmm_converged = fit.converged;
  } catch (const ArgumentError&) {
    eval->has_lmm = false;
  }
}

nlohmann::ordered_json eval_to_json(const TableEval& eval) {
  nlohmann::ordered_json out;
  out["l1"] = eval.l1;
  out["l2"] = eval.l2;
  out["mean_abs_corr_delta"] = eval.mean_abs_corr_delta;
  if (eval.has_lmm) {
    out["lmm"] = {{"week", eval.lmm_week}, {"tst_dev", eval.lmm_tst_dev}};
  }
  if (eval.r2_degenerate) {
    out["r2"] = nullptr;
  } else {
    out["r2"] = eval.r2;
  }
  return out;
}

}  // namespace

UtilityReport utility_report(
    const Table& real, const std::vector<std::pair<double, Table>>& synths,
    const EvalProtocol& protocol) {
  real.validate();
  for (const auto& [eps, synth] : synths) {
    if (!(eps > 0)) throw ArgumentError("epsilon keys must be positive");
    synth.validate();
    check_same_schema(real.schema, synth.schema);
  }
  const Schema& schema = real.schema;
  const std::size_t target = required_index(schema, protocol.target_col);

  Workload workload = protocol.workload;
  if (workload.queries.empty()) workload = all_kway_workload(schema, 2);
  workload.validate(schema.size());

  // Feature selection once, on the real training half only; every forest
  // afterwards sees exactly these columns.
  const auto [real_train, real_test] =
      split_rows(real, protocol.test_fraction, protocol.seed);
  (void)real_test;
  const std::size_t k =
      std::min(protocol.top_k, schema.size() - 1);
  const std::vector<std::size_t> features =
      top_k_correlated_features(real_train, target, k);

  const auto named = [&](const std::string& name) {
    return !name.empty() && schema.index_of(name).has_value();
  };
  const bool lmm_possible = named(protocol.group_col) &&
                            named(protocol.week_col) &&
                            named(protocol.gender_col) &&
                            named(protocol.sleep_col);

  UtilityReport report;
  const CorrMatrix real_corr = spearman_matrix(real);
  report.real.corr = real_corr;
  forest_eval(real, features, target, protocol, &report.real);
  if (lmm_possible) lmm_eval(real, protocol, &report.real);

  std::vector<std::pair<double, const Table*>> ordered;
  for (const auto& [eps, synth] : synths) ordered.emplace_back(eps, &synth);
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  for (const auto& [eps, synth] : ordered) {
    TableEval eval;
    eval.l1 = workload_error(workload, real, *synth, Norm::kL1);
    eval.l2 = workload_error(workload, real, *synth, Norm::kL2);
    eval.corr = spearman_matrix(*synth);
    const CorrDelta delta = corr_preservation(real_corr, eval.corr);
    eval.mean_abs_corr_delta = delta.mean_abs_delta;
    eval.max_abs_corr_delta = delta.max_abs_delta;
    forest_eval(*synth, features, target, protocol, &eval);
    if (lmm_possible) lmm_eval(*synth, protocol, &eval);
    report.by_epsilon.emplace_back(eps, std::move(eval));
  }
  return report;
}

std::string utility_report_to_json(const UtilityReport& report) {
  nlohmann::ordered_json doc;
  doc["original"] = eval_to_json(report.real);
  nlohmann::ordered_json by_eps = nlohmann::ordered_json::object();
  for (const auto& [eps, eval] : report.by_epsilon)
    by_eps[format_double(eps)] = eval_to_json(eval);
  doc["by_epsilon"] = std::move(by_eps);
  return doc.dump(2) + "\n";
}

}  // namespace dpsynth
