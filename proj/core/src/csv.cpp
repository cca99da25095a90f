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

#include "dpsynth/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "dpsynth/error.hpp"

namespace dpsynth {
namespace {

// Splits RFC 4180 text into records of fields. Handles quoted fields with
// doubled quotes and embedded newlines; accepts LF and CRLF terminators.
std::vector<std::vector<std::string>> split_records(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;

  auto end_field = [&] {
    fields.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(fields));
    fields.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field.empty() && !field_was_quoted) {
          in_quotes = true;
          field_was_quoted = true;
        } else {
          field.push_back(c);  // stray quote mid-field, kept verbatim
        }
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') {
          end_record();
          ++i;
        } else {
          field.push_back(c);
        }
        break;
      case '\n':
        end_record();
        break;
      default:
        field.push_back(c);
    }
  }
  if (in_quotes) throw StructuralError("CSV ends inside a quoted field");
  // Final record without trailing newline.
  if (!field.empty() || !fields.empty() || field_was_quoted) end_record();
  return records;
}

bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\n\r") != std::string::npos;
}

void append_field(std::string* out, const std::string& s) {
  if (!needs_quoting(s)) {
    *out += s;
    return;
  }
  out->push_back('"');
  for (char c : s) {
    if (c == '"') out->push_back('"');
    out->push_back(c);
  }
  out->push_back('"');
}

}  // namespace

RawTable parse_csv(const std::string& text) {
  auto records = split_records(text);
  if (records.empty()) throw StructuralError("missing header");
  RawTable raw;
  raw.column_names = std::move(records[0]);
  const std::size_t width = raw.column_names.size();
  raw.rows.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != width) {
      std::ostringstream msg;
      msg << "ragged CSV row " << r - 1 << ": " << records[r].size()
          << " fields under a " << width << "-column header";
      throw StructuralError(msg.str());
    }
    raw.rows.push_back(std::move(records[r]));
  }
  return raw;
}

RawTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure on " + path);
  return parse_csv(buf.str());
}

std::string format_csv(const RawTable& raw) {
  std::string out;
  for (std::size_t c = 0; c < raw.column_names.size(); ++c) {
    if (c) out.push_back(',');
    append_field(&out, raw.column_names[c]);
  }
  out.push_back('\n');
  for (const auto& row : raw.rows) {
    if (row.size() != raw.column_names.size())
      throw StructuralError("row width differs from header width");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out.push_back(',');
      append_field(&out, row[c]);
    }
    out.push_back('\n');
  }
  return out;
}

void write_csv(const RawTable& raw, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << format_csv(raw);
  if (!out) throw IoError("write failure on " + path);
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  // Integers within double precision print exactly, without ".0".
  if (value == std::floor(value) && std::abs(value) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0f", value);
    return buf;
  }
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error("double formatting failed");
  return std::string(buf, ptr);
}

}  // namespace dpsynth
