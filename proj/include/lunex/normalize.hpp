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

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "lunex/interval.hpp"
#include "lunex/response_parse.hpp"

namespace lunex {

enum class Unit { Percent, Ppm, Ppb };

const char* to_string(Unit u) noexcept;
/// Inverse of to_string(Unit); nullopt for anything else.
std::optional<Unit> unit_from_name(std::string_view name) noexcept;

enum class RepairFlag : uint8_t {
  SingleValueRepaired,
  BoundsSwapped,
  Inequality,
  SuspectCompound,
  WideMerge,
};

const char* to_string(RepairFlag f) noexcept;
std::optional<RepairFlag> flag_from_name(std::string_view name) noexcept;

struct Source {
  std::string doc_id;
  size_t chunk_index = 0;

  friend auto operator<=>(const Source&, const Source&) = default;
};

struct RecordKey {
  std::string sample_id;
  std::string compound;
  Unit unit = Unit::Percent;

  friend auto operator<=>(const RecordKey&, const RecordKey&) = default;
  std::string str() const;
};

struct CompositionRecord {
  std::string compound;
  std::string sample_id;
  Interval interval;
  Unit unit = Unit::Percent;
  std::set<Source> provenance;
  std::set<RepairFlag> flags;
  /// Length of the longest interval that contributed to this record. Set
  /// by normalize_record; merging takes the maximum.
  double widest_input = 0.0;

  RecordKey key() const { return {sample_id, compound, unit}; }
  friend bool operator==(const CompositionRecord&, const CompositionRecord&) = default;
};

class NormalizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SampleId {
  std::string id;
  std::string original;
};

/// Keeps only the digits. Throws NormalizeError when none remain.
SampleId normalize_sample_id(std::string_view raw);

struct CanonicalCompound {
  std::string name;
  bool suspect = false;
};

/// Maps case and subscript variants of known oxides and element symbols to
/// their canonical spelling. Unknown names (mineral phases and the like)
/// pass through verbatim, flagged as suspect.
CanonicalCompound canonicalize_compound(std::string_view raw);

/// Throws NormalizeError for units outside percent / ppm / ppb.
Unit normalize_unit(std::string_view raw);

/// Normalizes one raw row. Throws NormalizeError (or WeightParseError) when
/// the row cannot be turned into a record; callers quarantine it.
CompositionRecord normalize_record(const RawRecord& raw);

inline constexpr double kDefaultWideMergeFactor = 5.0;

/// Groups by (sample_id, compound, unit) and merges each group to its
/// envelope, keeping every source and flag. A merged record whose envelope
/// is more than `wide_merge_factor` times its widest contributing interval
/// is flagged WideMerge. Output is sorted by key.
std::vector<CompositionRecord> dedupe_and_merge(std::vector<CompositionRecord> records,
                                                double wide_merge_factor = kDefaultWideMergeFactor);

// Record store formats.
std::string records_csv(const std::vector<CompositionRecord>& records);
std::string records_json(const std::vector<CompositionRecord>& records);

class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, size_t line) : std::runtime_error(what), line_(line) {}
  size_t line() const noexcept { return line_; }

 private:
  size_t line_;
};

/// Reads the CSV written by records_csv. Throws FormatError with the line.
std::vector<CompositionRecord> parse_records_csv(std::string_view text);
std::vector<CompositionRecord> load_records_csv(const std::string& path);

}  // namespace lunex
