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

#include "lunex/normalize.hpp"

namespace lunex {

inline constexpr size_t kDefaultMinOccurrence = 5;
inline constexpr size_t kDefaultHistogramBins = 20;

struct FrequencyReport {
  std::map<std::string, size_t> counts;                 // kept: count > threshold
  std::vector<std::pair<std::string, size_t>> discarded;  // count <= threshold, by name
  size_t threshold = kDefaultMinOccurrence;
};

/// Occurrences per canonical compound. Compounds seen `threshold` times or
/// fewer are reported as discarded; the records themselves are untouched.
FrequencyReport compound_frequencies(const std::vector<CompositionRecord>& records,
                                     size_t threshold = kDefaultMinOccurrence);

struct LengthHistogram {
  std::vector<double> edges;  // bins + 1 edges over [0, max length]
  std::vector<size_t> counts;
};

struct DistributionEntry {
  std::string sample_id;
  Interval interval;
};

struct IntervalDistribution {
  std::string compound;
  std::optional<Unit> unit;
  std::vector<DistributionEntry> intervals;  // by lo, then hi, then sample id
  LengthHistogram histogram;
};

/// Equal-width histogram over [0, max(lengths)]; the maximum falls in the
/// last bin. With every length zero all mass lands in the first bin.
LengthHistogram length_histogram(const std::vector<double>& lengths, size_t bins = kDefaultHistogramBins);

/// Returns nullopt when no record matches (the "empty distribution" case).
std::optional<IntervalDistribution> interval_distribution(const std::vector<CompositionRecord>& records,
                                                          const std::string& compound,
                                                          std::optional<Unit> unit = std::nullopt,
                                                          size_t bins = kDefaultHistogramBins);

struct AnalyticsReport {
  FrequencyReport frequencies;
  std::vector<IntervalDistribution> distributions;  // kept compounds, one per unit present
};

AnalyticsReport analyze_corpus(const std::vector<CompositionRecord>& records,
                               size_t threshold = kDefaultMinOccurrence,
                               size_t bins = kDefaultHistogramBins);

/// {counts: {...}, discarded: [...], distributions: {...}}
std::string analytics_json(const AnalyticsReport& report);
/// Per-compound CSV: sample_id,lo,hi,length,unit in distribution order.
std::string distribution_csv(const IntervalDistribution& dist);

}  // namespace lunex
