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

#ifndef DPSYNTH_CSV_HPP_
#define DPSYNTH_CSV_HPP_

#include <string>

#include "dpsynth/table.hpp"

namespace dpsynth {

// RFC 4180 reader: quoted fields, doubled quotes inside quotes, embedded
// separators and newlines. Accepts both LF and CRLF input; the first record
// is the header. Every record must have the header's field count.
RawTable read_csv(const std::string& path);
RawTable parse_csv(const std::string& text);

// Writer: LF line endings, fields quoted only when they contain a quote,
// comma, or newline. Output is byte-stable for a given table.
void write_csv(const RawTable& raw, const std::string& path);
std::string format_csv(const RawTable& raw);

// Shortest round-trip decimal form of a double (std::to_chars). Integral
// values print without a trailing ".0"; used for every numeric cell this
// library writes so artifacts are reproducible byte for byte.
std::string format_double(double value);

}  // namespace dpsynth

#endif  // DPSYNTH_CSV_HPP_
