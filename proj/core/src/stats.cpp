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

#include "dpsynth/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "dpsynth/csv.hpp"
#include "dpsynth/error.hpp"

namespace dpsynth {
namespace {

bool is_constant(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(),
                     [&](double x) { return x == v.front(); });
}

std::vector<double> column_as_doubles(const Table& table, std::size_t col) {
  std::vector<double> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows)
    out.push_back(static_cast<double>(row[col]));
  return out;
}

CorrMatrix spearman_matrix_impl(
    const std::vector<std::string>& names,
    const std::vector<std::vector<double>>& columns) {
  const std::size_t d = columns.size();
  CorrMatrix m;
  m.columns = names;
  m.values.assign(d, std::vector<double>(d, 0.0));
  m.degenerate.assign(d, std::vector<bool>(d, false));

  std::vector<std::vector<double>> ranks(d);
  std::vector<bool> constant(d);
  for (std::size_t i = 0; i < d; ++i) {
    ranks[i] = rank_with_ties(columns[i]);
    constant[i] = is_constant(columns[i]);
  }
  for (std::size_t i = 0; i < d; ++i) {
    m.values[i][i] = 1.0;
    for (std::size_t j = i + 1; j < d; ++j) {
      double rho = 0.0;
      if (constant[i] || constant[j]) {
        m.degenerate[i][j] = m.degenerate[j][i] = true;
      } else {
        rho = pearson(ranks[i], ranks[j]);
      }
      m.values[i][j] = m.values[j][i] = rho;
    }
  }
  return m;
}

}  // namespace

std::vector<double> rank_with_ties(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share the value; midrank is their mean + 1.
    const double midrank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = midrank;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size())
    throw ArgumentError("pearson needs equal-length vectors");
  if (x.size() < 2) throw ArgumentError("pearson needs at least 2 points");
  const auto n = static_cast<double>(x.size());
  const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

SpearmanResult spearman(const std::vector<double>& x,
                        const std::vector<double>& y) {
  if (x.size() != y.size())
    throw ArgumentError("spearman needs equal-length vectors");
  if (x.size() < 2) throw ArgumentError("spearman needs at least 2 points");
  SpearmanResult result;
  if (is_constant(x) || is_constant(y)) {
    result.degenerate = true;
    return result;
  }
  result.rho = pearson(rank_with_ties(x), rank_with_ties(y));
  return result;
}

CorrMatrix spearman_matrix(const Table& table,
                           const std::vector<std::string>& columns) {
  table.validate();
  if (table.rows.size() < 3)
    throw ArgumentError("spearman_matrix needs at least 3 rows");
  std::vector<std::string> names;
  std::vector<std::vector<double>> data;
  if (columns.empty()) {
    for (std::size_t i = 0; i < table.schema.size(); ++i) {
      names.push_back(table.schema.at(i).name);
      data.push_back(column_as_doubles(table, i));
    }
  } else {
    for (const auto& name : columns) {
      const auto index = table.schema.index_of(name);
      if (!index) throw ArgumentError("no column named \"" + name + "\"");
      names.push_back(name);
      data.push_back(column_as_doubles(table, *index));
    }
  }
  return spearman_matrix_impl(names, data);
}

CorrMatrix spearman_matrix(const std::vector<std::string>& names,
                           const std::vector<std::vector<double>>& columns) {
  if (names.size() != columns.size())
    throw ArgumentError("spearman_matrix: names/columns size mismatch");
  if (columns.empty()) throw ArgumentError("spearman_matrix: no columns");
  const std::size_t n = columns.front().size();
  if (n < 3) throw ArgumentError("spearman_matrix needs at least 3 rows");
  for (const auto& col : columns)
    if (col.size() != n)
      throw ArgumentError("spearman_matrix: ragged columns");
  return spearman_matrix_impl(names, columns);
}

CorrDelta corr_preservation(const CorrMatrix& real, const CorrMatrix& synth) {
  if (real.columns != synth.columns)
    throw ArgumentError("correlation matrices cover different columns");
  const std::size_t d = real.columns.size();
  CorrDelta out;
  out.delta.assign(d, std::vector<double>(d, 0.0));
  double total = 0.0;
  std::size_t n_pairs = 0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double delta = synth.values[i][j] - real.values[i][j];
      out.delta[i][j] = delta;
      if (j > i) {
        total += std::abs(delta);
        out.max_abs_delta = std::max(out.max_abs_delta, std::abs(delta));
        ++n_pairs;
      }
    }
  }
  out.mean_abs_delta = n_pairs ? total / static_cast<double>(n_pairs) : 0.0;
  return out;
}

std::vector<double> center_within_group(const std::vector<double>& values,
                                        const std::vector<double>& groups) {
  if (values.size() != groups.size())
    throw ArgumentError("center_within_group: size mismatch");
  std::map<double, std::pair<double, std::size_t>> sums;
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto& [sum, count] = sums[groups[i]];
    sum += values[i];
    ++count;
  }
  std::vector<double> out(values.size(), 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& [sum, count] = sums[groups[i]];
    if (count > 1) out[i] = values[i] - sum / static_cast<double>(count);
  }
  return out;
}

std::vector<std::size_t> top_k_correlated_features(const Table& table,
                                                   std::size_t target_col,
                                                   std::size_t k) {
  table.validate();
  const std::size_t d = table.schema.size();
  if (target_col >= d) throw ArgumentError("target column out of range");
  if (k >= d)
    throw ArgumentError("k must be smaller than the number of columns");
  const std::vector<double> target = column_as_doubles(table, target_col);
  std::vector<std::pair<double, std::size_t>> scored;
  for (std::size_t j = 0; j < d; ++j) {
    if (j == target_col) continue;
    const SpearmanResult s = spearman(column_as_doubles(table, j), target);
    scored.emplace_back(std::abs(s.rho), j);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(scored[i].second);
  return out;
}

double r2_score(const std::vector<double>& predicted,
                const std::vector<double>& actual) {
  if (predicted.size() != actual.size())
    throw ArgumentError("r2_score needs equal-length vectors");
  if (actual.empty()) throw ArgumentError("r2_score needs data");
  if (is_constant(actual))
    throw ArgumentError("r2_score is undefined for a constant target");
  const double mean =
      std::accumulate(actual.begin(), actual.end(), 0.0) /
      static_cast<double>(actual.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    ss_res += (actual[i] - predicted[i]) * (actual[i] - predicted[i]);
    ss_tot += (actual[i] - mean) * (actual[i] - mean);
  }
  return 1.0 - ss_res / ss_tot;
}

std::string corr_matrix_to_csv(const CorrMatrix& m) {
  RawTable raw;
  raw.column_names.push_back("column");
  for (const auto& name : m.columns) raw.column_names.push_back(name);
  for (std::size_t i = 0; i < m.columns.size(); ++i) {
    std::vector<std::string> row;
    row.push_back(m.columns[i]);
    for (std::size_t j = 0; j < m.columns.size(); ++j)
      row.push_back(format_double(m.values[i][j]));
    raw.rows.push_back(std::move(row));
  }
  return format_csv(raw);
}

}  // namespace dpsynth
