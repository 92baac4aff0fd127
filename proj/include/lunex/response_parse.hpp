// Copyright 2026 The Lunex Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "lunex/interval.hpp"

namespace lunex {

struct Provenance {
  std::string doc_id;
  size_t chunk_index = 0;
  size_t line = 0;  // 1-based line within the completion text; 0 = not line-bound

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// One table row exactly as the model wrote it, each field trimmed.
struct RawRecord {
  std::string compound_raw;
  std::string sample_raw;
  std::string weight_raw;
  std::string unit_raw;
  /// Fields past the fourth, joined with ", ". Not used for matching.
  std::string annotation;
  Provenance provenance;

  friend bool operator==(const RawRecord&, const RawRecord&) = default;
};

enum class IssueKind { MalformedRow, UnknownStructure, EmptyTable };

const char* to_string(IssueKind kind) noexcept;

struct ParseIssue {
  Provenance provenance;
  std::string line_text;
  IssueKind kind = IssueKind::MalformedRow;
  std::string detail;
};

struct ParseResult {
  std::vector<RawRecord> records;
  std::vector<ParseIssue> issues;
  /// Lines that were candidates for data (not blank, fence, header, or
  /// markdown rule). Equals records plus line-bound issues.
  size_t data_lines = 0;
};

/// Parses a completion into raw rows. Never throws: anything that is not a
/// usable row becomes a ParseIssue. Code fences, markdown pipes and rules,
/// the header row, and trailing commas are tolerated. A response without
/// any candidate lines yields one EmptyTable notice (line 0).
ParseResult parse_completion(std::string_view text, const Provenance& origin);

/// Serializes a raw record as a table row that parse_completion accepts.
std::string to_table_row(const RawRecord& r);

struct WeightParse {
  Interval interval;
  bool single_value = false;  // "2.15" read as [2.15, 2.15]
  bool swapped = false;       // "5-3" read as [3, 5]
  bool inequality = false;    // "<0.1" read as [0, 0.1]
};

class WeightParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "a-b" ranges (the hyphen is never a sign), single values, and upper
/// bounds ("<x", "<=x", "≤x"). En and em dashes also separate ranges.
WeightParse parse_weight(std::string_view weight_raw);

}  // namespace lunex
