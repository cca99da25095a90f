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

#include "dpsynth/schema.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "dpsynth/error.hpp"

namespace dpsynth {
namespace {

using Json = nlohmann::ordered_json;

std::string kind_to_string(AttributeKind kind) {
  switch (kind) {
    case AttributeKind::kCategorical:
      return "categorical";
    case AttributeKind::kOrdinal:
      return "ordinal";
    case AttributeKind::kContinuous:
      return "continuous";
  }
  throw ArgumentError("unknown attribute kind");
}

AttributeKind kind_from_string(const std::string& s) {
  if (s == "categorical") return AttributeKind::kCategorical;
  if (s == "ordinal") return AttributeKind::kOrdinal;
  if (s == "continuous") return AttributeKind::kContinuous;
  throw ConfigError("unknown attribute kind \"" + s + "\"");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure on " + path);
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("write failure on " + path);
}

}  // namespace

std::size_t AttributeSpec::total_codes() const {
  std::size_t base = kind == AttributeKind::kContinuous
                         ? bin_edges.size() + 1
                         : domain_size;
  return base + (has_missing_code ? 1 : 0);
}

void AttributeSpec::validate() const {
  if (name.empty()) throw ArgumentError("attribute with empty name");
  if (kind == AttributeKind::kContinuous) {
    if (bin_edges.empty())
      throw ArgumentError("continuous attribute \"" + name +
                          "\" needs at least one bin edge");
    for (std::size_t i = 1; i < bin_edges.size(); ++i) {
      if (!(bin_edges[i - 1] < bin_edges[i]))
        throw ArgumentError("bin_edges of \"" + name +
                            "\" must be strictly increasing");
    }
    if (domain_size != 0 && domain_size != bin_edges.size() + 1)
      throw ArgumentError("domain_size of continuous \"" + name +
                          "\" must equal len(bin_edges) + 1");
    if (!code_labels.empty())
      throw ArgumentError("continuous attribute \"" + name +
                          "\" cannot carry code_labels");
  } else {
    if (domain_size < 1)
      throw ArgumentError("attribute \"" + name +
                          "\" needs a positive domain_size");
    if (!bin_edges.empty())
      throw ArgumentError("non-continuous attribute \"" + name +
                          "\" cannot carry bin_edges");
    if (!code_labels.empty() && code_labels.size() != domain_size)
      throw ArgumentError("code_labels of \"" + name +
                          "\" must have domain_size entries");
  }
}

std::optional<std::size_t> Schema::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    if (attributes[i].name == name) return i;
  }
  return std::nullopt;
}

void Schema::validate() const {
  std::unordered_set<std::string> seen;
  for (const auto& attr : attributes) {
    attr.validate();
    if (!seen.insert(attr.name).second)
      throw ArgumentError("duplicate attribute name \"" + attr.name + "\"");
  }
}

Schema schema_from_json(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("schema JSON parse error: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("attributes") ||
      !doc["attributes"].is_array())
    throw ConfigError("schema JSON must be {\"attributes\": [...]}");

  Schema schema;
  if (doc.contains("n_expected")) {
    if (!doc["n_expected"].is_number_unsigned() ||
        doc["n_expected"].get<std::size_t>() == 0)
      throw ConfigError("n_expected must be a positive integer");
    schema.n_expected = doc["n_expected"].get<std::size_t>();
  }
  for (const auto& entry : doc["attributes"]) {
    if (!entry.is_object())
      throw ConfigError("schema attribute entries must be objects");
    AttributeSpec attr;
    if (!entry.contains("name") || !entry["name"].is_string())
      throw ConfigError("schema attribute missing string \"name\"");
    attr.name = entry["name"].get<std::string>();
    if (!entry.contains("kind") || !entry["kind"].is_string())
      throw ConfigError("attribute \"" + attr.name +
                        "\" missing string \"kind\"");
    attr.kind = kind_from_string(entry["kind"].get<std::string>());
    if (entry.contains("domain_size"))
      attr.domain_size = entry["domain_size"].get<std::size_t>();
    if (entry.contains("bin_edges"))
      attr.bin_edges = entry["bin_edges"].get<std::vector<double>>();
    if (entry.contains("code_labels"))
      attr.code_labels =
          entry["code_labels"].get<std::vector<std::string>>();
    if (entry.contains("has_missing_code"))
      attr.has_missing_code = entry["has_missing_code"].get<bool>();
    try {
      attr.validate();
    } catch (const ArgumentError& e) {
      throw ConfigError(e.what());
    }
    schema.attributes.push_back(std::move(attr));
  }
  try {
    schema.validate();
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
  return schema;
}

std::string schema_to_json(const Schema& schema) {
  Json doc;
  if (schema.n_expected != 0) doc["n_expected"] = schema.n_expected;
  doc["attributes"] = Json::array();
  for (const auto& attr : schema.attributes) {
    Json entry;
    entry["name"] = attr.name;
    entry["kind"] = kind_to_string(attr.kind);
    if (attr.kind == AttributeKind::kContinuous) {
      entry["bin_edges"] = attr.bin_edges;
    } else {
      entry["domain_size"] = attr.domain_size;
      if (!attr.code_labels.empty()) entry["code_labels"] = attr.code_labels;
    }
    if (attr.has_missing_code) entry["has_missing_code"] = true;
    doc["attributes"].push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

Schema load_schema(const std::string& path) {
  return schema_from_json(read_file(path));
}

void save_schema(const Schema& schema, const std::string& path) {
  write_file(path, schema_to_json(schema));
}

void Workload::validate(std::size_t n_attributes) const {
  std::set<std::vector<std::size_t>> seen;
  for (const auto& q : queries) {
    if (q.attributes.empty())
      throw ArgumentError("workload query with no attributes");
    for (std::size_t i = 0; i < q.attributes.size(); ++i) {
      if (q.attributes[i] >= n_attributes)
        throw ArgumentError("workload attribute index out of range");
      if (i > 0 && q.attributes[i - 1] >= q.attributes[i])
        throw ArgumentError("workload query attributes must be sorted unique");
    }
    if (!(q.weight > 0)) throw ArgumentError("workload weight must be > 0");
    if (!seen.insert(q.attributes).second)
      throw ArgumentError("duplicate workload query");
  }
}

Workload workload_from_json(const std::string& text, const Schema& schema) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("workload JSON parse error: ") + e.what());
  }
  if (!doc.is_array())
    throw ConfigError("workload JSON must be a list of queries");

  Workload workload;
  for (const auto& entry : doc) {
    WorkloadQuery query;
    const Json* names = nullptr;
    if (entry.is_array()) {
      names = &entry;
    } else if (entry.is_object() && entry.contains("attributes")) {
      names = &entry["attributes"];
      if (entry.contains("weight")) query.weight = entry["weight"].get<double>();
    } else {
      throw ConfigError(
          "workload entries must be name arrays or {attributes, weight}");
    }
    for (const auto& name : *names) {
      if (!name.is_string())
        throw ConfigError("workload attribute names must be strings");
      auto idx = schema.index_of(name.get<std::string>());
      if (!idx)
        throw ConfigError("workload names unknown attribute \"" +
                          name.get<std::string>() + "\"");
      query.attributes.push_back(*idx);
    }
    std::sort(query.attributes.begin(), query.attributes.end());
    workload.queries.push_back(std::move(query));
  }
  try {
    workload.validate(schema.size());
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
  return workload;
}

Workload load_workload(const std::string& path, const Schema& schema) {
  return workload_from_json(read_file(path), schema);
}

Workload all_kway_workload(const Schema& schema, std::size_t k) {
  const std::size_t d = schema.size();
  if (k == 0 || k > d)
    throw ArgumentError("workload arity must be in [1, n_attributes]");
  Workload workload;
  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  for (;;) {
    workload.queries.push_back({pick, 1.0});
    // next lexicographic combination
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == d - k + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return workload;
}

}  // namespace dpsynth
