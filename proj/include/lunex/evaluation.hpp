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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lunex/interval_metrics.hpp"
#include "lunex/normalize.hpp"

namespace lunex {

struct GroundTruthEntry {
  std::string compound;
  std::string sample_id;
  Interval interval;
  Unit unit = Unit::Percent;

  RecordKey key() const { return {sample_id, compound, unit}; }
};

/// Reads a `compound,sample_id,lo,hi,unit` CSV. Throws FormatError naming
/// the line for malformed rows, inverted bounds, and duplicate keys.
std::vector<GroundTruthEntry> parse_ground_truth(std::string_view text);
std::vector<GroundTruthEntry> load_ground_truth(const std::string& path);

enum class MatchKind { Matched, MissedTruth, FalsePositive };

const char* to_string(MatchKind k) noexcept;

struct MatchResult {
  RecordKey key;
  MatchKind kind = MatchKind::Matched;
  std::optional<Interval> truth;
  std::optional<Interval> estimate;
  /// Set on a miss/false-positive pair caused by the same (sample,
  /// compound) being reported in a different unit.
  bool unit_mismatch = false;
};

/// Exact join on (sample_id, compound, unit). Extracted records sharing a
/// key are merged to their envelope first. Output is sorted by key.
std::vector<MatchResult> join_records(const std::vector<CompositionRecord>& extracted,
                                      const std::vector<GroundTruthEntry>& truth);

struct MetricRow {
  RecordKey key;
  double abs_err = 0.0;
  std::optional<double> rel_err;  // percent; absent when the truth midpoint is 0
  bool rel_err_flag = false;      // small-denominator sensitivity
  double precision = 0.0;
  double recall = 0.0;
};

std::vector<MetricRow> compute_metrics(const std::vector<MatchResult>& matches,
                                       double small_denominator = metrics::kDefaultSmallDenominator);

enum class RecallCell { Provided, Missed, NotTruthed };

const char* to_string(RecallCell c) noexcept;

/// Compound × sample presence grid. A cell is Provided when any truthed key
/// for that (compound, sample) was matched, whatever its accuracy; Missed
/// when truth exists but nothing matched (a unit mismatch counts as a miss).
struct RecallMatrix {
  std::vector<std::string> compounds;  // rows, sorted
  std::vector<std::string> samples;    // columns, sorted
  std::map<std::pair<std::string, std::string>, RecallCell> cells;  // (compound, sample)

  RecallCell at(const std::string& compound, const std::string& sample) const;
};

RecallMatrix recall_matrix(const std::vector<MatchResult>& matches);

enum class Metric { AbsErr, RelErr, Precision, Recall };
enum class GroupBy { Sample, Compound };

const char* to_string(Metric m) noexcept;
std::optional<Metric> metric_from_name(std::string_view name) noexcept;
std::optional<GroupBy> group_by_from_name(std::string_view name) noexcept;

struct Outlier {
  RecordKey key;
  double value = 0.0;
};

/// Five-number box-plot summary. Quartiles use the median-exclusive method:
/// Q1 and Q3 are the medians of the values strictly below and above the
/// median position. Outliers lie beyond 1.5 IQR from the box; whiskers end
/// at the most extreme non-outlier values.
struct DistributionSummary {
  std::string group;
  size_t count = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double whisker_lo = 0.0;
  double whisker_hi = 0.0;
  std::vector<Outlier> outliers;
};

struct QuartileSummary {
  double min, q1, median, q3, max;
};

/// Median-exclusive quartiles of a non-empty sample.
QuartileSummary quartiles(std::vector<double> values);

struct SummaryReport {
  std::vector<DistributionSummary> groups;  // sorted by group name
  std::vector<std::string> notices;         // groups omitted for lack of values
};

SummaryReport summarize(const std::vector<MetricRow>& rows, Metric metric, GroupBy by);

/// Group with the lowest median; ties go to the first in name order.
std::optional<std::string> weakest_group(const SummaryReport& report);

/// Keeps only records / truth / rows in the given unit.
std::vector<CompositionRecord> filter_unit(std::vector<CompositionRecord> records, Unit unit);
std::vector<GroundTruthEntry> filter_unit(std::vector<GroundTruthEntry> truth, Unit unit);

// Output formats.
std::string metrics_csv(const std::vector<MetricRow>& rows);
std::string metrics_json(const std::vector<MetricRow>& rows);
std::string matches_csv(const std::vector<MatchResult>& matches);
std::string recall_matrix_csv(const RecallMatrix& m);
std::string recall_matrix_json(const RecallMatrix& m);
std::string summaries_json(const std::map<std::string, SummaryReport>& reports);

std::vector<MetricRow> parse_metrics_csv(std::string_view text);
RecallMatrix parse_recall_matrix_csv(std::string_view text);

}  // namespace lunex
