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

#include "dpsynth/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "dpsynth/csv.hpp"
#include "dpsynth/error.hpp"
#include "dpsynth/rng.hpp"

namespace dpsynth {
namespace {

bool parse_number(const std::string& s, double* out) {
  if (s.empty()) return false;
  const char* begin = s.data();
  const char* end = begin + s.size();
  char* parsed_end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &parsed_end);
  if (parsed_end != end || errno == ERANGE || !std::isfinite(v)) return false;
  *out = v;
  return true;
}

bool parse_integer(const std::string& s, long long* out) {
  if (s.empty()) return false;
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return false;
  *out = v;
  return true;
}

// Bin of a continuous value: the number of edges <= v. Covers all of R, so
// out-of-range values land in the first or last bin without special cases.
std::size_t continuous_code(const std::vector<double>& edges, double v) {
  return static_cast<std::size_t>(
      std::upper_bound(edges.begin(), edges.end(), v) - edges.begin());
}

}  // namespace

void Table::validate() const {
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != schema.size())
      throw StructuralError("row width differs from schema width");
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      if (rows[r][c] >= schema.at(c).total_codes()) {
        std::ostringstream msg;
        msg << "code " << rows[r][c] << " out of domain for attribute \""
            << schema.at(c).name << "\" at row " << r;
        throw StructuralError(msg.str());
      }
    }
  }
  if (!row_ids.empty()) {
    if (row_ids.size() != rows.size())
      throw StructuralError("row_ids length differs from row count");
    std::unordered_set<std::string> seen;
    for (const auto& id : row_ids) {
      if (!seen.insert(id).second)
        throw StructuralError("duplicate row id \"" + id + "\"");
    }
  }
}

Schema infer_schema(const RawTable& raw, std::size_t n_bins) {
  if (n_bins < 2) throw ArgumentError("n_bins must be at least 2");
  Schema schema;
  for (std::size_t c = 0; c < raw.n_cols(); ++c) {
    AttributeSpec attr;
    attr.name = raw.column_names[c];

    bool all_numeric = true;
    bool all_integer = true;
    bool any_value = false;
    double lo = 0.0, hi = 0.0;
    long long int_lo = 0, int_hi = 0;
    std::set<long long> int_values;
    std::set<std::string> labels;
    for (const auto& row : raw.rows) {
      const std::string& cell = row[c];
      if (cell.empty()) continue;
      labels.insert(cell);
      double v;
      if (!parse_number(cell, &v)) {
        all_numeric = false;
        all_integer = false;
        continue;
      }
      long long iv;
      if (!parse_integer(cell, &iv)) all_integer = false;
      if (!any_value) {
        lo = hi = v;
        if (all_integer) int_lo = int_hi = iv;
      } else {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (all_integer) {
        int_lo = std::min(int_lo, iv);
        int_hi = std::max(int_hi, iv);
        int_values.insert(iv);
      }
      any_value = true;
    }

    if (!any_value) {
      // Column of only missing cells: a single-code categorical.
      attr.kind = AttributeKind::kCategorical;
      attr.domain_size = 1;
    } else if (all_integer && int_lo >= 0 &&
               int_hi < static_cast<long long>(std::max<std::size_t>(n_bins, 64)) &&
               int_values.size() <= 64) {
      // Small non-negative integer codes, e.g. survey answers: keep them as
      // ordinal codes so encode/decode is lossless.
      attr.kind = AttributeKind::kOrdinal;
      attr.domain_size = static_cast<std::size_t>(int_hi) + 1;
    } else if (all_numeric && hi > lo) {
      attr.kind = AttributeKind::kContinuous;
      attr.bin_edges.reserve(n_bins - 1);
      const double width = (hi - lo) / static_cast<double>(n_bins);
      for (std::size_t i = 1; i < n_bins; ++i) {
        attr.bin_edges.push_back(lo + width * static_cast<double>(i));
      }
      // Guard against repeated edges from limited precision.
      attr.bin_edges.erase(
          std::unique(attr.bin_edges.begin(), attr.bin_edges.end()),
          attr.bin_edges.end());
    } else if (all_numeric) {
      // Constant numeric column.
      attr.kind = AttributeKind::kCategorical;
      attr.domain_size = 1;
      attr.code_labels = {*labels.begin()};
    } else {
      attr.kind = AttributeKind::kCategorical;
      attr.domain_size = labels.size();
      attr.code_labels.assign(labels.begin(), labels.end());
    }
    schema.attributes.push_back(std::move(attr));
  }
  schema.n_expected = raw.n_rows();
  schema.validate();
  return schema;
}

EncodeResult encode(const RawTable& raw, const Schema& schema,
                    const EncodeOptions& options) {
  schema.validate();
  const std::size_t d = schema.size();

  std::vector<std::size_t> column_of(d);
  for (std::size_t a = 0; a < d; ++a) {
    auto it = std::find(raw.column_names.begin(), raw.column_names.end(),
                        schema.at(a).name);
    if (it == raw.column_names.end())
      throw ArgumentError("CSV is missing schema column \"" +
                          schema.at(a).name + "\"");
    column_of[a] = static_cast<std::size_t>(it - raw.column_names.begin());
  }

  EncodeResult result;
  result.table.schema = schema;
  if (options.missing_policy == MissingPolicy::kDedicatedCode) {
    // Data-independent extension: every attribute gets the missing code,
    // whether or not this particular file has gaps in that column.
    for (auto& attr : result.table.schema.attributes)
      attr.has_missing_code = true;
  }
  const Schema& out_schema = result.table.schema;

  result.report.rows_in = raw.n_rows();
  result.report.clamped_by_attribute.assign(d, 0);

  // Label -> code lookup per attribute.
  std::vector<std::map<std::string, std::size_t>> label_code(d);
  for (std::size_t a = 0; a < d; ++a) {
    const auto& labels = out_schema.at(a).code_labels;
    for (std::size_t code = 0; code < labels.size(); ++code)
      label_code[a][labels[code]] = code;
  }

  std::vector<std::size_t> codes(d);
  for (std::size_t r = 0; r < raw.n_rows(); ++r) {
    if (raw.rows[r].size() != raw.n_cols())
      throw StructuralError("ragged raw row");
    bool drop = false;
    for (std::size_t a = 0; a < d && !drop; ++a) {
      const AttributeSpec& attr = out_schema.at(a);
      const std::string& cell = raw.rows[r][column_of[a]];
      if (cell.empty()) {
        ++result.report.missing_cells;
        if (options.missing_policy == MissingPolicy::kDropRow) {
          drop = true;
        } else {
          codes[a] = attr.total_codes() - 1;  // the appended missing code
        }
        continue;
      }
      if (attr.kind == AttributeKind::kContinuous) {
        double v;
        if (!parse_number(cell, &v))
          throw ArgumentError("non-numeric value \"" + cell +
                              "\" in continuous column \"" + attr.name + "\"");
        codes[a] = continuous_code(attr.bin_edges, v);
        continue;
      }
      if (!attr.code_labels.empty()) {
        auto it = label_code[a].find(cell);
        if (it == label_code[a].end())
          throw ArgumentError("unseen label \"" + cell + "\" in column \"" +
                              attr.name + "\"");
        codes[a] = it->second;
        continue;
      }
      long long code;
      if (!parse_integer(cell, &code))
        throw ArgumentError("value \"" + cell + "\" in column \"" + attr.name +
                            "\" is not an integer code");
      if (code < 0) {
        codes[a] = 0;
        ++result.report.clamped_cells;
        ++result.report.clamped_by_attribute[a];
      } else if (static_cast<std::size_t>(code) >= attr.domain_size) {
        codes[a] = attr.domain_size - 1;
        ++result.report.clamped_cells;
        ++result.report.clamped_by_attribute[a];
      } else {
        codes[a] = static_cast<std::size_t>(code);
      }
    }
    if (drop) {
      ++result.report.rows_dropped;
    } else {
      result.table.rows.push_back(codes);
    }
  }
  return result;
}

double attribute_numeric_value(const AttributeSpec& attr, std::size_t code) {
  if (attr.kind != AttributeKind::kContinuous ||
      (attr.has_missing_code && code == attr.total_codes() - 1)) {
    return static_cast<double>(code);
  }
  const auto& e = attr.bin_edges;
  const std::size_t k = e.size();
  if (code == 0) {
    const double width = k > 1 ? e[1] - e[0] : 1.0;
    return e[0] - width / 2.0;
  }
  if (code == k) {
    const double width = k > 1 ? e[k - 1] - e[k - 2] : 1.0;
    return e[k - 1] + width / 2.0;
  }
  return (e[code - 1] + e[code]) / 2.0;
}

RawTable decode(const Table& table) {
  RawTable raw;
  const Schema& schema = table.schema;
  for (const auto& attr : schema.attributes) raw.column_names.push_back(attr.name);

  // Precompute the decoded string per (attribute, code).
  std::vector<std::vector<std::string>> decoded(schema.size());
  for (std::size_t a = 0; a < schema.size(); ++a) {
    const AttributeSpec& attr = schema.at(a);
    const std::size_t total = attr.total_codes();
    decoded[a].resize(total);
    for (std::size_t code = 0; code < total; ++code) {
      if (attr.has_missing_code && code == total - 1) {
        decoded[a][code] = "";
        continue;
      }
      if (attr.kind != AttributeKind::kContinuous) {
        decoded[a][code] = code < attr.code_labels.size()
                               ? attr.code_labels[code]
                               : format_double(static_cast<double>(code));
        continue;
      }
      decoded[a][code] = format_double(attribute_numeric_value(attr, code));
    }
  }

  raw.rows.reserve(table.n_rows());
  for (const auto& row : table.rows) {
    std::vector<std::string> cells(schema.size());
    for (std::size_t a = 0; a < schema.size(); ++a)
      cells[a] = decoded[a][row[a]];
    raw.rows.push_back(std::move(cells));
  }
  return raw;
}

std::pair<Table, Table> split_rows(const Table& table, double holdout_fraction,
                                   std::uint64_t seed) {
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0))
    throw ArgumentError("split fraction must be in (0, 1)");
  const std::size_t n = table.n_rows();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j =
        static_cast<std::size_t>(rng.uniform_index(static_cast<std::uint64_t>(i)));
    std::swap(perm[i - 1], perm[j]);
  }
  const auto n_holdout = static_cast<std::size_t>(
      std::llround(holdout_fraction * static_cast<double>(n)));

  auto take = [&](std::size_t begin, std::size_t end) {
    Table part;
    part.schema = table.schema;
    part.rows.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) part.rows.push_back(table.rows[perm[i]]);
    if (!table.row_ids.empty()) {
      part.row_ids.reserve(end - begin);
      for (std::size_t i = begin; i < end; ++i)
        part.row_ids.push_back(table.row_ids[perm[i]]);
    }
    return part;
  };
  return {take(n_holdout, n), take(0, n_holdout)};
}

}  // namespace dpsynth
