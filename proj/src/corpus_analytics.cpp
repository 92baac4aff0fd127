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

#include "lunex/corpus_analytics.hpp"

#include <algorithm>
#include <json.hpp>
#include <set>

#include "lunex/format.hpp"
#include "lunex/interval_metrics.hpp"

namespace lunex {

FrequencyReport compound_frequencies(const std::vector<CompositionRecord>& records, size_t threshold) {
  std::map<std::string, size_t> all;
  for (const auto& r : records) ++all[r.compound];
  FrequencyReport report;
  report.threshold = threshold;
  for (const auto& [name, n] : all) {
    if (n > threshold) {
      report.counts.emplace(name, n);
    } else {
      report.discarded.emplace_back(name, n);
    }
  }
  return report;
}

LengthHistogram length_histogram(const std::vector<double>& lengths, size_t bins) {
  if (bins == 0) throw std::invalid_argument("histogram needs at least one bin");
  LengthHistogram h;
  h.counts.assign(bins, 0);
  const double max_len = lengths.empty() ? 0.0 : *std::max_element(lengths.begin(), lengths.end());
  h.edges.reserve(bins + 1);
  for (size_t i = 0; i <= bins; ++i) h.edges.push_back(max_len * static_cast<double>(i) / static_cast<double>(bins));
  for (double len : lengths) {
    size_t bin = 0;
    if (max_len > 0.0) {
      bin = static_cast<size_t>(len / max_len * static_cast<double>(bins));
      bin = std::min(bin, bins - 1);
    }
    ++h.counts[bin];
  }
  return h;
}

std::optional<IntervalDistribution> interval_distribution(const std::vector<CompositionRecord>& records,
                                                          const std::string& compound,
                                                          std::optional<Unit> unit, size_t bins) {
  IntervalDistribution d;
  d.compound = compound;
  d.unit = unit;
  for (const auto& r : records) {
    if (r.compound != compound || (unit && r.unit != *unit)) continue;
    d.intervals.push_back({r.sample_id, r.interval});
  }
  if (d.intervals.empty()) return std::nullopt;
  std::sort(d.intervals.begin(), d.intervals.end(), [](const DistributionEntry& a, const DistributionEntry& b) {
    return std::tuple(a.interval.lo(), a.interval.hi(), a.sample_id) <
           std::tuple(b.interval.lo(), b.interval.hi(), b.sample_id);
  });
  std::vector<double> lengths;
  for (const auto& e : d.intervals) lengths.push_back(metrics::length(e.interval));
  d.histogram = length_histogram(lengths, bins);
  return d;
}

AnalyticsReport analyze_corpus(const std::vector<CompositionRecord>& records, size_t threshold, size_t bins) {
  AnalyticsReport report;
  report.frequencies = compound_frequencies(records, threshold);
  for (const auto& [compound, n] : report.frequencies.counts) {
    std::set<Unit> units;
    for (const auto& r : records) {
      if (r.compound == compound) units.insert(r.unit);
    }
    for (Unit u : units) {
      if (auto d = interval_distribution(records, compound, u, bins)) report.distributions.push_back(std::move(*d));
    }
  }
  return report;
}

std::string analytics_json(const AnalyticsReport& report) {
  using ojson = nlohmann::ordered_json;
  ojson counts = ojson::object();
  for (const auto& [name, n] : report.frequencies.counts) counts[name] = n;
  ojson discarded = ojson::array();
  for (const auto& [name, n] : report.frequencies.discarded) discarded.push_back({{"compound", name}, {"count", n}});
  ojson dists = ojson::object();
  for (const auto& d : report.distributions) {
    ojson intervals = ojson::array();
    for (const auto& e : d.intervals) {
      intervals.push_back({{"sample_id", e.sample_id}, {"lo", e.interval.lo()}, {"hi", e.interval.hi()}});
    }
    ojson entry = {{"unit", d.unit ? to_string(*d.unit) : "any"},
                   {"intervals", intervals},
                   {"histogram", {{"edges", d.histogram.edges}, {"counts", d.histogram.counts}}}};
    if (!dists.contains(d.compound)) dists[d.compound] = ojson::array();
    dists[d.compound].push_back(entry);
  }
  ojson j = {{"threshold", report.frequencies.threshold},
             {"counts", counts},
             {"discarded", discarded},
             {"distributions", dists}};
  return j.dump(2) + "\n";
}

std::string distribution_csv(const IntervalDistribution& dist) {
  std::string out = "sample_id,lo,hi,length,unit\n";
  for (const auto& e : dist.intervals) {
    out += csv::row({e.sample_id, format_number(e.interval.lo()), format_number(e.interval.hi()),
                     format_number(metrics::length(e.interval)), dist.unit ? to_string(*dist.unit) : "any"});
    out += '\n';
  }
  return out;
}

}  // namespace lunex
