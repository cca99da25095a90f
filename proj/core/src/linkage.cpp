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

#include "dpsynth/linkage.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "dpsynth/csv.hpp"
#include "dpsynth/error.hpp"

namespace dpsynth {
namespace {

std::optional<double> try_parse_number(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const char* begin = text.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end != begin + text.size()) return std::nullopt;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

std::size_t column_index(const RawTable& table, const std::string& name,
                         const char* role) {
  for (std::size_t i = 0; i < table.column_names.size(); ++i) {
    if (table.column_names[i] == name) return i;
  }
  throw ConfigError(std::string(role) + " table is missing column \"" + name +
                    "\"");
}

// Blocking key for one row: numeric cells are canonicalized so "7" and "7.0"
// block together; an empty cell yields no key (missing never matches).
std::optional<std::string> block_key(const std::vector<std::string>& row,
                                     const std::vector<std::size_t>& cols) {
  std::string key;
  for (const std::size_t c : cols) {
    const std::string& cell = c < row.size() ? row[c] : std::string();
    if (cell.empty()) return std::nullopt;
    if (const auto value = try_parse_number(cell)) {
      key += format_double(*value);
    } else {
      key += cell;
    }
    key += '\x1f';  // unit separator, cannot appear via CSV parsing
  }
  return key;
}

std::string row_id_of(const RawTable& table, std::size_t id_col,
                      bool has_id_col, std::size_t row) {
  if (has_id_col && id_col < table.rows[row].size()) {
    const std::string& value = table.rows[row][id_col];
    if (!value.empty()) return value;
  }
  return std::to_string(row);
}

}  // namespace

double linear_similarity(double a, double b, double offset, double scale) {
  if (offset < 0) throw ArgumentError("similarity offset must be >= 0");
  if (!(scale > 0)) throw ArgumentError("similarity scale must be positive");
  const double d = std::abs(a - b);
  if (d <= offset) return 1.0;
  return std::max(0.0, 1.0 - (d - offset) / scale);
}

void LinkageConfig::validate() const {
  if (exact_cols.empty())
    throw ConfigError("linkage needs at least one exact-match column");
  if (numeric_col.empty())
    throw ConfigError("linkage needs a numeric column to score");
  if (std::find(exact_cols.begin(), exact_cols.end(), numeric_col) !=
      exact_cols.end())
    throw ConfigError("numeric column \"" + numeric_col +
                      "\" cannot also be an exact-match column");
  if (offset < 0) throw ConfigError("linkage offset must be >= 0");
  if (!(scale > 0)) throw ConfigError("linkage scale must be positive");
  if (!(sim_threshold > 0) || sim_threshold > 1)
    throw ConfigError("linkage similarity threshold must be in (0, 1]");
}

MatchResult linkage_attack(const RawTable& target, const RawTable& aux,
                           const LinkageConfig& cfg) {
  cfg.validate();
  std::vector<std::size_t> target_exact;
  std::vector<std::size_t> aux_exact;
  for (const auto& name : cfg.exact_cols) {
    target_exact.push_back(column_index(target, name, "target"));
    aux_exact.push_back(column_index(aux, name, "aux"));
  }
  const std::size_t target_numeric =
      column_index(target, cfg.numeric_col, "target");
  const std::size_t aux_numeric = column_index(aux, cfg.numeric_col, "aux");

  auto id_column = [](const RawTable& table) {
    for (std::size_t i = 0; i < table.column_names.size(); ++i) {
      if (table.column_names[i] == "row_id") return std::make_pair(true, i);
    }
    return std::make_pair(false, std::size_t{0});
  };
  const auto [target_has_id, target_id_col] = id_column(target);
  const auto [aux_has_id, aux_id_col] = id_column(aux);

  std::unordered_map<std::string, std::vector<std::size_t>> aux_blocks;
  for (std::size_t r = 0; r < aux.rows.size(); ++r) {
    if (const auto key = block_key(aux.rows[r], aux_exact))
      aux_blocks[*key].push_back(r);
  }

  MatchResult result;
  for (std::size_t t = 0; t < target.rows.size(); ++t) {
    const auto key = block_key(target.rows[t], target_exact);
    if (!key) continue;
    const auto it = aux_blocks.find(*key);
    if (it == aux_blocks.end()) continue;
    const auto target_value =
        target_numeric < target.rows[t].size()
            ? try_parse_number(target.rows[t][target_numeric])
            : std::nullopt;
    for (const std::size_t a : it->second) {
      ++result.pairs_blocked;
      if (!target_value) continue;
      const auto aux_value = aux_numeric < aux.rows[a].size()
                                 ? try_parse_number(aux.rows[a][aux_numeric])
                                 : std::nullopt;
      if (!aux_value) continue;
      const double sim =
          linear_similarity(*target_value, *aux_value, cfg.offset, cfg.scale);
      if (sim < cfg.sim_threshold) continue;
      MatchPair pair;
      pair.target_row = t;
      pair.aux_row = a;
      pair.target_row_id = row_id_of(target, target_id_col, target_has_id, t);
      pair.aux_row_id = row_id_of(aux, aux_id_col, aux_has_id, a);
      pair.similarity = sim;
      result.pairs.push_back(std::move(pair));
    }
  }

  std::sort(result.pairs.begin(), result.pairs.end(),
            [](const MatchPair& x, const MatchPair& y) {
              if (x.similarity != y.similarity)
                return x.similarity > y.similarity;
              if (x.target_row != y.target_row)
                return x.target_row < y.target_row;
              return x.aux_row < y.aux_row;
            });
  return result;
}

std::string match_result_to_json(const MatchResult& result) {
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const auto& pair : result.pairs) {
    pairs.push_back({{"target_row", pair.target_row},
                     {"aux_row", pair.aux_row},
                     {"target_row_id", pair.target_row_id},
                     {"aux_row_id", pair.aux_row_id},
                     {"similarity", pair.similarity}});
  }
  nlohmann::ordered_json doc;
  doc["pairs"] = std::move(pairs);
  doc["pairs_blocked"] = result.pairs_blocked;
  return doc.dump(2) + "\n";
}

}  // namespace dpsynth
