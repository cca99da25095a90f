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

#ifndef DPSYNTH_SCHEMA_HPP_
#define DPSYNTH_SCHEMA_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace dpsynth {

enum class AttributeKind { kCategorical, kOrdinal, kContinuous };

// Description of one column of an encoded table.
//
// Categorical and ordinal attributes carry an explicit domain size and
// optionally one label per code; ordinal means the code order is meaningful.
// Continuous attributes carry sorted bin edges; values are binned by
// counting edges <= v, so k edges produce k + 1 codes. When
// has_missing_code is set the domain is extended by one trailing code that
// encodes a missing value; that code is appended after the codes implied by
// domain_size / bin_edges.
struct AttributeSpec {
  std::string name;
  AttributeKind kind = AttributeKind::kCategorical;

  // Categorical/ordinal: number of codes before any missing-value extension.
  std::size_t domain_size = 0;

  // Continuous: strictly increasing bin edges.
  std::vector<double> bin_edges;

  // Categorical only, optional: one label per code (pre-extension).
  std::vector<std::string> code_labels;

  bool has_missing_code = false;

  // Total number of codes this attribute can take, including the missing
  // code when present.
  std::size_t total_codes() const;

  // Checks internal consistency; throws ArgumentError on violation.
  void validate() const;
};

struct Schema {
  std::vector<AttributeSpec> attributes;

  // Declared row count, when the producer knows it; 0 means unspecified.
  std::size_t n_expected = 0;

  std::size_t size() const { return attributes.size(); }
  const AttributeSpec& at(std::size_t i) const { return attributes[i]; }

  // Index of the attribute with the given name.
  std::optional<std::size_t> index_of(const std::string& name) const;

  void validate() const;
};

// JSON (de)serialization. The textual form is:
//   {"attributes": [{"name": ..., "kind": "categorical"|"ordinal"|
//                    "continuous", "domain_size": ... | "bin_edges": [...],
//                    "code_labels": [...]?, "has_missing_code": bool?}]}
Schema schema_from_json(const std::string& text);
std::string schema_to_json(const Schema& schema);

Schema load_schema(const std::string& path);
void save_schema(const Schema& schema, const std::string& path);

// Workload: sets of attribute indices, each with a positive weight. Queries
// are stored with attributes sorted ascending and must be pairwise distinct.
struct WorkloadQuery {
  std::vector<std::size_t> attributes;
  double weight = 1.0;
};

struct Workload {
  std::vector<WorkloadQuery> queries;

  // Throws ArgumentError on duplicate queries, bad indices, or weight <= 0.
  void validate(std::size_t n_attributes) const;
};

// Parses a JSON workload (a list of attribute-name arrays, or of objects
// {"attributes": [...names...], "weight": w}) against a schema.
Workload workload_from_json(const std::string& text, const Schema& schema);
Workload load_workload(const std::string& path, const Schema& schema);

// All C(d, k) attribute subsets of size k, unit weights, in lexicographic
// order. k = 2 is the default workload when no file is supplied.
Workload all_kway_workload(const Schema& schema, std::size_t k);

}  // namespace dpsynth

#endif  // DPSYNTH_SCHEMA_HPP_
