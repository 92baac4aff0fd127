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

#include "lunex/evaluation.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <set>

#include "lunex/format.hpp"

namespace lunex {

using ojson = nlohmann::ordered_json;

std::vector<GroundTruthEntry> parse_ground_truth(std::string_view text) {
  std::vector<GroundTruthEntry> out;
  std::map<RecordKey, size_t> first_seen;
  size_t line_no = 0;
  bool header_seen = false;
  for (const auto& line : split(text, '\n')) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fail = [&](const std::string& why) {
      return FormatError("ground truth line " + std::to_string(line_no) + ": " + why, line_no);
    };
    auto f = csv::parse_line(line);
    for (auto& x : f) x = std::string(trim(x));
    if (!header_seen) {
      if (f.size() != 5 || f[0] != "compound" || f[1] != "sample_id" || f[2] != "lo" ||
          f[3] != "hi" || f[4] != "unit") {
        throw fail("expected header 'compound,sample_id,lo,hi,unit'");
      }
      header_seen = true;
      continue;
    }
    if (f.size() != 5) throw fail("expected 5 fields, found " + std::to_string(f.size()));
    GroundTruthEntry e;
    e.compound = f[0];
    if (e.compound.empty()) throw fail("empty compound");
    e.sample_id = f[1];
    if (e.sample_id.empty() || e.sample_id.find_first_not_of("0123456789") != std::string::npos) {
      throw fail("sample id '" + f[1] + "' is not all digits");
    }
    auto lo = parse_number(f[2]);
    auto hi = parse_number(f[3]);
    if (!lo || !hi) throw fail("non-numeric bound");
    if (*lo > *hi) throw fail("lower bound " + f[2] + " exceeds upper bound " + f[3]);
    e.interval = Interval(*lo, *hi);
    auto unit = unit_from_name(to_lower(f[4]));
    if (!unit) throw fail("unknown unit '" + f[4] + "'");
    e.unit = *unit;
    auto [it, fresh] = first_seen.emplace(e.key(), line_no);
    if (!fresh) {
      throw fail("duplicate key " + e.key().str() + " (first at line " + std::to_string(it->second) + ")");
    }
    out.push_back(std::move(e));
  }
  if (!header_seen) throw FormatError("ground truth file is empty", 0);
  return out;
}

std::vector<GroundTruthEntry> load_ground_truth(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open ground truth file " + path, 0);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_ground_truth(data);
}

const char* to_string(MatchKind k) noexcept {
  switch (k) {
    case MatchKind::Matched: return "matched";
    case MatchKind::MissedTruth: return "missed";
    case MatchKind::FalsePositive: return "false-positive";
  }
  return "?";
}

std::vector<MatchResult> join_records(const std::vector<CompositionRecord>& extracted,
                                      const std::vector<GroundTruthEntry>& truth) {
  std::map<RecordKey, Interval> est;
  for (const auto& r : extracted) {
    auto [it, fresh] = est.emplace(r.key(), r.interval);
    if (!fresh) it->second = it->second.hull(r.interval);
  }
  std::map<RecordKey, Interval> tru;
  for (const auto& t : truth) {
    auto [it, fresh] = tru.emplace(t.key(), t.interval);
    if (!fresh) it->second = it->second.hull(t.interval);
  }

  // (sample, compound) pairs present on each side, for unit-mismatch marking.
  std::set<std::pair<std::string, std::string>> est_pairs, tru_pairs;
  for (const auto& [k, _] : est) est_pairs.emplace(k.sample_id, k.compound);
  for (const auto& [k, _] : tru) tru_pairs.emplace(k.sample_id, k.compound);

  std::vector<MatchResult> out;
  for (const auto& [k, t] : tru) {
    MatchResult m{k, MatchKind::MissedTruth, t, std::nullopt, false};
    if (auto it = est.find(k); it != est.end()) {
      m.kind = MatchKind::Matched;
      m.estimate = it->second;
    } else {
      m.unit_mismatch = est_pairs.count({k.sample_id, k.compound}) > 0;
    }
    out.push_back(std::move(m));
  }
  for (const auto& [k, e] : est) {
    if (tru.count(k)) continue;
    MatchResult m{k, MatchKind::FalsePositive, std::nullopt, e, false};
    m.unit_mismatch = tru_pairs.count({k.sample_id, k.compound}) > 0;
    out.push_back(std::move(m));
  }
  std::sort(out.begin(), out.end(), [](const MatchResult& a, const MatchResult& b) {
    return std::tie(a.key, a.kind) < std::tie(b.key, b.kind);
  });
  return out;
}

std::vector<MetricRow> compute_metrics(const std::vector<MatchResult>& matches, double small_denominator) {
  std::vector<MetricRow> rows;
  for (const auto& m : matches) {
    if (m.kind != MatchKind::Matched) continue;
    const Interval& t = *m.truth;
    const Interval& e = *m.estimate;
    MetricRow row;
    row.key = m.key;
    row.abs_err = metrics::midpoint_abs_err(t, e);
    const auto rel = metrics::midpoint_rel_err(t, e, small_denominator);
    row.rel_err = rel.percent;
    row.rel_err_flag = rel.small_denominator;
    row.precision = metrics::precision(t, e);
    row.recall = metrics::recall(t, e);
    rows.push_back(std::move(row));
  }
  return rows;
}

const char* to_string(RecallCell c) noexcept {
  switch (c) {
    case RecallCell::Provided: return "provided";
    case RecallCell::Missed: return "missed";
    case RecallCell::NotTruthed: return "not-truthed";
  }
  return "?";
}

RecallCell RecallMatrix::at(const std::string& compound, const std::string& sample) const {
  auto it = cells.find({compound, sample});
  return it == cells.end() ? RecallCell::NotTruthed : it->second;
}

RecallMatrix recall_matrix(const std::vector<MatchResult>& matches) {
  RecallMatrix m;
  std::set<std::string> compounds, samples;
  for (const auto& r : matches) {
    compounds.insert(r.key.compound);
    samples.insert(r.key.sample_id);
    const std::pair<std::string, std::string> cell{r.key.compound, r.key.sample_id};
    if (r.kind == MatchKind::Matched) {
      m.cells[cell] = RecallCell::Provided;
    } else if (r.kind == MatchKind::MissedTruth) {
      m.cells.try_emplace(cell, RecallCell::Missed);
    }
  }
  m.compounds.assign(compounds.begin(), compounds.end());
  m.samples.assign(samples.begin(), samples.end());
  return m;
}

const char* to_string(Metric m) noexcept {
  switch (m) {
    case Metric::AbsErr: return "abs_err";
    case Metric::RelErr: return "rel_err";
    case Metric::Precision: return "precision";
    case Metric::Recall: return "recall";
  }
  return "?";
}

std::optional<Metric> metric_from_name(std::string_view name) noexcept {
  for (auto m : {Metric::AbsErr, Metric::RelErr, Metric::Precision, Metric::Recall}) {
    if (name == to_string(m)) return m;
  }
  return std::nullopt;
}

std::optional<GroupBy> group_by_from_name(std::string_view name) noexcept {
  if (name == "sample") return GroupBy::Sample;
  if (name == "compound") return GroupBy::Compound;
  return std::nullopt;
}

namespace {

double median_of(const std::vector<double>& v, size_t begin, size_t end) {
  const size_t n = end - begin;
  const size_t mid = begin + n / 2;
  return n % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2.0;
}

std::optional<double> metric_value(const MetricRow& r, Metric m) {
  switch (m) {
    case Metric::AbsErr: return r.abs_err;
    case Metric::RelErr: return r.rel_err;
    case Metric::Precision: return r.precision;
    case Metric::Recall: return r.recall;
  }
  return std::nullopt;
}

}  // namespace

QuartileSummary quartiles(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("quartiles of an empty sample");
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  QuartileSummary q{v.front(), 0, median_of(v, 0, n), 0, v.back()};
  if (n == 1) {
    q.q1 = q.q3 = q.median;
  } else {
    q.q1 = median_of(v, 0, n / 2);
    q.q3 = median_of(v, (n + 1) / 2, n);
  }
  return q;
}

SummaryReport summarize(const std::vector<MetricRow>& rows, Metric metric, GroupBy by) {
  std::map<std::string, std::vector<std::pair<double, RecordKey>>> groups;
  std::set<std::string> seen;
  for (const auto& r : rows) {
    const std::string& g = by == GroupBy::Sample ? r.key.sample_id : r.key.compound;
    seen.insert(g);
    if (auto v = metric_value(r, metric)) groups[g].emplace_back(*v, r.key);
  }
  SummaryReport report;
  for (const auto& g : seen) {
    auto it = groups.find(g);
    if (it == groups.end()) {
      report.notices.push_back("group " + g + " has no " + to_string(metric) + " values; omitted");
      continue;
    }
    std::vector<double> values;
    for (const auto& [v, _] : it->second) values.push_back(v);
    const QuartileSummary q = quartiles(values);
    DistributionSummary s;
    s.group = g;
    s.count = values.size();
    s.min = q.min;
    s.q1 = q.q1;
    s.median = q.median;
    s.q3 = q.q3;
    s.max = q.max;
    const double iqr = q.q3 - q.q1;
    const double lo_fence = q.q1 - 1.5 * iqr;
    const double hi_fence = q.q3 + 1.5 * iqr;
    s.whisker_lo = q.max;
    s.whisker_hi = q.min;
    auto points = it->second;
    std::sort(points.begin(), points.end());
    for (const auto& [v, key] : points) {
      if (v < lo_fence || v > hi_fence) {
        s.outliers.push_back({key, v});
      } else {
        s.whisker_lo = std::min(s.whisker_lo, v);
        s.whisker_hi = std::max(s.whisker_hi, v);
      }
    }
    report.groups.push_back(std::move(s));
  }
  return report;
}

std::optional<std::string> weakest_group(const SummaryReport& report) {
  const DistributionSummary* best = nullptr;
  for (const auto& g : report.groups) {
    if (!best || g.median < best->median) best = &g;
  }
  if (!best) return std::nullopt;
  return best->group;
}

std::vector<CompositionRecord> filter_unit(std::vector<CompositionRecord> records, Unit unit) {
  std::erase_if(records, [unit](const CompositionRecord& r) { return r.unit != unit; });
  return records;
}

std::vector<GroundTruthEntry> filter_unit(std::vector<GroundTruthEntry> truth, Unit unit) {
  std::erase_if(truth, [unit](const GroundTruthEntry& t) { return t.unit != unit; });
  return truth;
}

// ---------------------------------------------------------------------------

std::string metrics_csv(const std::vector<MetricRow>& rows) {
  std::string out = "sample_id,compound,unit,abs_err,rel_err,rel_err_flag,precision,recall\n";
  for (const auto& r : rows) {
    out += csv::row({r.key.sample_id, r.key.compound, to_string(r.key.unit), format_number(r.abs_err),
                     r.rel_err ? format_number(*r.rel_err) : "", r.rel_err_flag ? "1" : "0",
                     format_number(r.precision), format_number(r.recall)});
    out += '\n';
  }
  return out;
}

std::string metrics_json(const std::vector<MetricRow>& rows) {
  ojson arr = ojson::array();
  for (const auto& r : rows) {
    arr.push_back({{"sample_id", r.key.sample_id},
                   {"compound", r.key.compound},
                   {"unit", to_string(r.key.unit)},
                   {"abs_err", r.abs_err},
                   {"rel_err", r.rel_err ? ojson(*r.rel_err) : ojson(nullptr)},
                   {"rel_err_flag", r.rel_err_flag},
                   {"precision", r.precision},
                   {"recall", r.recall}});
  }
  return arr.dump(2) + "\n";
}

std::string matches_csv(const std::vector<MatchResult>& matches) {
  std::string out = "sample_id,compound,unit,kind,truth_lo,truth_hi,est_lo,est_hi,unit_mismatch\n";
  for (const auto& m : matches) {
    out += csv::row({m.key.sample_id, m.key.compound, to_string(m.key.unit), to_string(m.kind),
                     m.truth ? format_number(m.truth->lo()) : "", m.truth ? format_number(m.truth->hi()) : "",
                     m.estimate ? format_number(m.estimate->lo()) : "",
                     m.estimate ? format_number(m.estimate->hi()) : "", m.unit_mismatch ? "1" : "0"});
    out += '\n';
  }
  return out;
}

std::string recall_matrix_csv(const RecallMatrix& m) {
  std::vector<std::string> header{"compound"};
  header.insert(header.end(), m.samples.begin(), m.samples.end());
  std::string out = csv::row(header) + "\n";
  for (const auto& c : m.compounds) {
    std::vector<std::string> row{c};
    for (const auto& s : m.samples) row.emplace_back(to_string(m.at(c, s)));
    out += csv::row(row) + "\n";
  }
  return out;
}

std::string recall_matrix_json(const RecallMatrix& m) {
  ojson cells = ojson::object();
  for (const auto& c : m.compounds) {
    ojson row = ojson::object();
    for (const auto& s : m.samples) row[s] = to_string(m.at(c, s));
    cells[c] = row;
  }
  ojson j = {{"compounds", m.compounds}, {"samples", m.samples}, {"cells", cells}};
  return j.dump(2) + "\n";
}

std::string summaries_json(const std::map<std::string, SummaryReport>& reports) {
  ojson j = ojson::object();
  for (const auto& [name, report] : reports) {
    ojson groups = ojson::array();
    for (const auto& g : report.groups) {
      ojson outliers = ojson::array();
      for (const auto& o : g.outliers) outliers.push_back({{"key", o.key.str()}, {"value", o.value}});
      groups.push_back({{"group", g.group},
                        {"count", g.count},
                        {"min", g.min},
                        {"q1", g.q1},
                        {"median", g.median},
                        {"q3", g.q3},
                        {"max", g.max},
                        {"whisker_lo", g.whisker_lo},
                        {"whisker_hi", g.whisker_hi},
                        {"outliers", outliers}});
    }
    j[name] = {{"groups", groups}, {"notices", report.notices}};
  }
  return j.dump(2) + "\n";
}

std::vector<MetricRow> parse_metrics_csv(std::string_view text) {
  std::vector<MetricRow> rows;
  size_t line_no = 0;
  bool header_seen = false;
  for (const auto& line : split(text, '\n')) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (trim(line) != "sample_id,compound,unit,abs_err,rel_err,rel_err_flag,precision,recall") {
        throw FormatError("metrics file line 1: unexpected header", line_no);
      }
      continue;
    }
    auto fail = [&](const std::string& why) {
      return FormatError("metrics file line " + std::to_string(line_no) + ": " + why, line_no);
    };
    auto f = csv::parse_line(line);
    if (f.size() != 8) throw fail("expected 8 fields");
    MetricRow r;
    auto unit = unit_from_name(f[2]);
    if (!unit) throw fail("unknown unit '" + f[2] + "'");
    r.key = {f[0], f[1], *unit};
    auto abs_err = parse_number(f[3]);
    auto precision = parse_number(f[6]);
    auto recall = parse_number(f[7]);
    if (!abs_err || !precision || !recall) throw fail("non-numeric metric");
    r.abs_err = *abs_err;
    if (!f[4].empty()) {
      r.rel_err = parse_number(f[4]);
      if (!r.rel_err) throw fail("non-numeric rel_err");
    }
    r.rel_err_flag = f[5] == "1";
    r.precision = *precision;
    r.recall = *recall;
    rows.push_back(std::move(r));
  }
  if (!header_seen) throw FormatError("metrics file is empty", 0);
  return rows;
}

RecallMatrix parse_recall_matrix_csv(std::string_view text) {
  RecallMatrix m;
  size_t line_no = 0;
  for (const auto& line : split(text, '\n')) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto f = csv::parse_line(line);
    if (m.samples.empty() && line_no == 1) {
      if (f.empty() || f[0] != "compound") throw FormatError("recall matrix line 1: bad header", 1);
      m.samples.assign(f.begin() + 1, f.end());
      continue;
    }
    if (f.size() != m.samples.size() + 1) {
      throw FormatError("recall matrix line " + std::to_string(line_no) + ": wrong field count", line_no);
    }
    m.compounds.push_back(f[0]);
    for (size_t i = 0; i < m.samples.size(); ++i) {
      if (f[i + 1] == "provided") m.cells[{f[0], m.samples[i]}] = RecallCell::Provided;
      else if (f[i + 1] == "missed") m.cells[{f[0], m.samples[i]}] = RecallCell::Missed;
      else if (f[i + 1] != "not-truthed") {
        throw FormatError("recall matrix line " + std::to_string(line_no) + ": bad cell '" + f[i + 1] + "'",
                          line_no);
      }
    }
  }
  if (line_no == 0 || (m.samples.empty() && m.compounds.empty())) throw FormatError("recall matrix is empty", 0);
  return m;
}

}  // namespace lunex
