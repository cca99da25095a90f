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

#ifndef DPSYNTH_TABLE_HPP_
#define DPSYNTH_TABLE_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dpsynth/schema.hpp"

namespace dpsynth {

// Untyped table as read from CSV. Cells are strings; the empty string marks
// a missing value.
struct RawTable {
  std::vector<std::string> column_names;
  std::vector<std::vector<std::string>> rows;

  std::size_t n_rows() const { return rows.size(); }
  std::size_t n_cols() const { return column_names.size(); }
};

// Fully encoded table: every cell is a code in [0, total_codes(attribute)).
struct Table {
  Schema schema;
  std::vector<std::vector<std::size_t>> rows;

  // Optional opaque per-row identifiers; empty means absent. When present
  // they are unique and carry no meaning beyond joining attack outputs back
  // to rows.
  std::vector<std::string> row_ids;

  std::size_t n_rows() const { return rows.size(); }
  std::size_t n_cols() const { return schema.size(); }

  // Throws StructuralError on out-of-domain cells or duplicate row_ids.
  void validate() const;
};

enum class MissingPolicy { kDropRow, kDedicatedCode };

struct EncodeOptions {
  MissingPolicy missing_policy = MissingPolicy::kDedicatedCode;
};

// Per-run accounting of lossy encode steps.
struct EncodeReport {
  std::size_t rows_in = 0;
  std::size_t rows_dropped = 0;
  std::size_t missing_cells = 0;
  std::size_t clamped_cells = 0;
  std::vector<std::size_t> clamped_by_attribute;
};

struct EncodeResult {
  Table table;
  EncodeReport report;
};

// Builds a schema from raw data: columns whose non-missing cells all parse
// as numbers become continuous with equal-width bin edges (n_bins bins,
// hence n_bins - 1 edges); all other columns become categorical with one
// code per distinct cell, labels sorted ascending.
Schema infer_schema(const RawTable& raw, std::size_t n_bins = 32);

// Encodes raw cells against the schema.
//
// Continuous cells map to count(bin_edges <= value); out-of-range values
// land in the first or last bin by construction. Categorical cells match a
// code label when labels are present, otherwise parse as an integer code;
// integer codes outside the domain are clamped to the nearest end and
// counted in the report. Missing cells are handled per the policy: kDropRow
// removes the whole row, kDedicatedCode extends every attribute domain by
// one trailing code (data independent) and maps missing cells onto it.
//
// Raw columns are matched to schema attributes by name; extra raw columns
// are ignored, absent ones raise ArgumentError.
EncodeResult encode(const RawTable& raw, const Schema& schema,
                    const EncodeOptions& options = {});

// Inverse of encode up to binning loss. Continuous codes map to the bin
// midpoint; the two edge bins map to first_edge - w/2 and last_edge + w/2
// where w is the width of the adjacent interior bin (1.0 when there is a
// single edge). Missing codes decode to the empty string.
RawTable decode(const Table& table);

// Numeric value a code stands for: continuous codes map to their bin
// midpoint (edge bins extend half the adjacent bin's width, 1.0 when there
// is a single edge), every other kind maps to the code itself. This is the
// value scale decode() prints and the regression metrics consume.
double attribute_numeric_value(const AttributeSpec& attr, std::size_t code);

// Deterministic row split. Rows are permuted by a Fisher-Yates shuffle
// seeded from `seed`, then the first round(holdout_fraction * n) rows form
// the second (holdout) part. Ordering inside each part follows the permuted
// order.
std::pair<Table, Table> split_rows(const Table& table,
                                   double holdout_fraction,
                                   std::uint64_t seed);

}  // namespace dpsynth

#endif  // DPSYNTH_TABLE_HPP_
