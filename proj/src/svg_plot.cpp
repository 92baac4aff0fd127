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

#include "lunex/svg_plot.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "lunex/format.hpp"

namespace lunex::svg {

namespace {

constexpr const char* kTruthColor = "#1f4fd1";
constexpr const char* kDotColor = "#ff8c1a";

// Fixed-precision coordinates keep output byte-stable.
std::string px(double v) {
  if (std::fabs(v) < 0.005) v = 0.0;
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
  return std::string(buf, r.ptr);
}

std::string esc(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string tick_label(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 4);
  return std::string(buf, r.ptr);
}

class Doc {
 public:
  Doc(double w, double h) : w_(w), h_(h) {}

  void line(double x1, double y1, double x2, double y2, std::string_view stroke, double width = 1.0) {
    body_ += "<line x1=\"" + px(x1) + "\" y1=\"" + px(y1) + "\" x2=\"" + px(x2) + "\" y2=\"" + px(y2) +
             "\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"" + px(width) + "\"/>\n";
  }
  void rect(double x, double y, double w, double h, std::string_view fill, std::string_view stroke = "none",
            std::string_view extra = "") {
    body_ += "<rect x=\"" + px(x) + "\" y=\"" + px(y) + "\" width=\"" + px(w) + "\" height=\"" + px(h) +
             "\" fill=\"" + std::string(fill) + "\" stroke=\"" + std::string(stroke) + "\"" +
             std::string(extra) + "/>\n";
  }
  void circle(double cx, double cy, double r, std::string_view fill) {
    body_ += "<circle cx=\"" + px(cx) + "\" cy=\"" + px(cy) + "\" r=\"" + px(r) + "\" fill=\"" +
             std::string(fill) + "\"/>\n";
  }
  void path(const std::string& d, std::string_view fill, std::string_view extra = "") {
    body_ += "<path d=\"" + d + "\" fill=\"" + std::string(fill) + "\"" + std::string(extra) + "/>\n";
  }
  void text(double x, double y, std::string_view s, std::string_view anchor = "start", int size = 11,
            std::string_view extra = "") {
    body_ += "<text x=\"" + px(x) + "\" y=\"" + px(y) + "\" font-size=\"" + std::to_string(size) +
             "\" text-anchor=\"" + std::string(anchor) + "\"" + std::string(extra) + ">" + esc(s) + "</text>\n";
  }

  std::string str() const {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(w_) + "\" height=\"" + px(h_) +
           "\" viewBox=\"0 0 " + px(w_) + " " + px(h_) + "\" font-family=\"sans-serif\">\n" +
           "<rect x=\"0\" y=\"0\" width=\"" + px(w_) + "\" height=\"" + px(h_) + "\" fill=\"white\"/>\n" +
           body_ + "</svg>\n";
  }

 private:
  double w_, h_;
  std::string body_;
};

std::vector<double> ticks(double lo, double hi, int n = 5) {
  std::vector<double> out;
  for (int i = 0; i <= n; ++i) out.push_back(lo + (hi - lo) * i / n);
  return out;
}

std::string hourglass(double x, double y, double half) {
  return "M " + px(x - half) + " " + px(y - half) + " L " + px(x + half) + " " + px(y - half) + " L " +
         px(x - half) + " " + px(y + half) + " L " + px(x + half) + " " + px(y + half) + " Z";
}

}  // namespace

std::string interval_plot(const std::vector<GroundTruthEntry>& truth, const std::vector<IntervalSeries>& estimates,
                          const std::vector<std::string>& compounds, Unit unit, double min_bar_px) {
  struct Bar {
    size_t series;  // 0 = truth
    Interval iv;
  };
  // compound -> sample -> bars
  std::map<std::string, std::map<std::string, std::vector<Bar>>> panels;
  std::set<std::string> wanted(compounds.begin(), compounds.end());
  for (const auto& t : truth) {
    if (t.unit == unit && wanted.count(t.compound)) panels[t.compound][t.sample_id].push_back({0, t.interval});
  }
  for (size_t s = 0; s < estimates.size(); ++s) {
    for (const auto& r : estimates[s].records) {
      if (r.unit == unit && wanted.count(r.compound)) panels[r.compound][r.sample_id].push_back({s + 1, r.interval});
    }
  }
  if (panels.empty()) throw std::invalid_argument("no intervals to plot for the requested compounds");

  std::set<std::string> sample_set;
  for (const auto& [c, by_sample] : panels) {
    for (const auto& [s, _] : by_sample) sample_set.insert(s);
  }
  const std::vector<std::string> samples(sample_set.begin(), sample_set.end());
  const size_t n_series = estimates.size() + 1;

  const double left = 70, right = 20, top = 40, panel_h = 200, gap = 60, slot = 64;
  const double width = left + right + slot * static_cast<double>(samples.size());
  const double height = top + (panel_h + gap) * static_cast<double>(panels.size());
  Doc doc(width, height);

  // Legend.
  double lx = left;
  auto legend = [&](const std::string& label, const std::string& color) {
    doc.rect(lx, 12, 12, 12, color);
    doc.text(lx + 16, 22, label);
    lx += 24 + 7.0 * static_cast<double>(label.size());
  };
  legend("truth", kTruthColor);
  for (const auto& e : estimates) legend(e.label, e.color);

  double y0 = top;
  for (const auto& [compound, by_sample] : panels) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& [s, bars] : by_sample) {
      for (const auto& b : bars) {
        lo = std::min(lo, b.iv.lo());
        hi = std::max(hi, b.iv.hi());
      }
    }
    double pad = (hi - lo) * 0.08;
    if (pad == 0.0) pad = std::max(std::fabs(hi) * 0.1, 1.0);
    lo -= pad;
    hi += pad;
    auto ymap = [&](double v) { return y0 + panel_h - (v - lo) / (hi - lo) * panel_h; };

    doc.text(left, y0 - 6, compound + " (" + to_string(unit) + ")", "start", 13, " font-weight=\"bold\"");
    doc.rect(left, y0, width - left - right, panel_h, "none", "#444");
    for (double t : ticks(lo, hi)) {
      doc.line(left - 4, ymap(t), left, ymap(t), "#444");
      doc.text(left - 6, ymap(t) + 4, tick_label(t), "end", 10);
    }
    for (size_t i = 0; i < samples.size(); ++i) {
      const double cx = left + slot * (static_cast<double>(i) + 0.5);
      doc.text(cx, y0 + panel_h + 16, samples[i], "middle", 10);
      auto it = by_sample.find(samples[i]);
      if (it == by_sample.end()) continue;
      for (const auto& b : it->second) {
        const double offset = (static_cast<double>(b.series) - (static_cast<double>(n_series) - 1) / 2.0) * 14.0;
        const double x = cx + offset;
        const std::string color = b.series == 0 ? kTruthColor : estimates[b.series - 1].color;
        const double y_top = ymap(b.iv.hi());
        const double y_bot = ymap(b.iv.lo());
        if (y_bot - y_top < min_bar_px) {
          doc.path(hourglass(x, (y_top + y_bot) / 2, 5), color, " class=\"hourglass\"");
        } else {
          doc.rect(x - 4, y_top, 8, y_bot - y_top, color, "none", " fill-opacity=\"0.85\"");
        }
      }
    }
    y0 += panel_h + gap;
  }
  return doc.str();
}

namespace {

std::optional<double> value_of(const MetricRow& r, Metric m) {
  switch (m) {
    case Metric::AbsErr: return r.abs_err;
    case Metric::RelErr: return r.rel_err;
    case Metric::Precision: return r.precision;
    case Metric::Recall: return r.recall;
  }
  return std::nullopt;
}

}  // namespace

std::string box_plot(const SummaryReport& report, const std::vector<MetricRow>& rows, Metric metric, GroupBy by) {
  if (report.groups.empty()) throw std::invalid_argument("no metric values to plot");
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& g : report.groups) {
    lo = std::min(lo, g.min);
    hi = std::max(hi, g.max);
  }
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double left = 90, right = 30, top = 40, row_h = 32, plot_w = 480;
  const double height = top + row_h * static_cast<double>(report.groups.size()) + 50;
  Doc doc(left + plot_w + right, height);
  auto xmap = [&](double v) { return left + (v - lo) / (hi - lo) * plot_w; };

  doc.text(left, 22, std::string(to_string(metric)) + " by " + (by == GroupBy::Sample ? "sample" : "compound"),
           "start", 13, " font-weight=\"bold\"");
  const double axis_y = top + row_h * static_cast<double>(report.groups.size()) + 8;
  doc.line(left, axis_y, left + plot_w, axis_y, "#444");
  for (double t : ticks(lo, hi)) {
    doc.line(xmap(t), axis_y, xmap(t), axis_y + 4, "#444");
    doc.text(xmap(t), axis_y + 16, tick_label(t), "middle", 10);
  }

  for (size_t i = 0; i < report.groups.size(); ++i) {
    const auto& g = report.groups[i];
    const double cy = top + row_h * (static_cast<double>(i) + 0.5);
    doc.text(left - 8, cy + 4, g.group, "end", 11);
    doc.line(xmap(g.whisker_lo), cy, xmap(g.q1), cy, "#333");
    doc.line(xmap(g.q3), cy, xmap(g.whisker_hi), cy, "#333");
    doc.line(xmap(g.whisker_lo), cy - 6, xmap(g.whisker_lo), cy + 6, "#333");
    doc.line(xmap(g.whisker_hi), cy - 6, xmap(g.whisker_hi), cy + 6, "#333");
    doc.rect(xmap(g.q1), cy - 9, std::max(xmap(g.q3) - xmap(g.q1), 0.5), 18, "#dde6f7", "#333");
    doc.line(xmap(g.median), cy - 9, xmap(g.median), cy + 9, "#c00", 2);
    for (const auto& r : rows) {
      const std::string& key = by == GroupBy::Sample ? r.key.sample_id : r.key.compound;
      if (key != g.group) continue;
      if (auto v = value_of(r, metric)) doc.circle(xmap(*v), cy, 2.5, kDotColor);
    }
  }
  return doc.str();
}

std::string matrix_plot(const RecallMatrix& m) {
  if (m.compounds.empty() || m.samples.empty()) throw std::invalid_argument("empty recall matrix");
  const double left = 90, top = 70, cell = 26;
  Doc doc(left + cell * static_cast<double>(m.samples.size()) + 20,
          top + cell * static_cast<double>(m.compounds.size()) + 40);
  for (size_t j = 0; j < m.samples.size(); ++j) {
    const double x = left + cell * (static_cast<double>(j) + 0.5);
    doc.text(x, top - 8, m.samples[j], "start", 10,
             " transform=\"rotate(-60 " + px(x) + " " + px(top - 8) + ")\"");
  }
  for (size_t i = 0; i < m.compounds.size(); ++i) {
    const double y = top + cell * static_cast<double>(i);
    doc.text(left - 6, y + cell / 2 + 4, m.compounds[i], "end", 10);
    for (size_t j = 0; j < m.samples.size(); ++j) {
      const RecallCell c = m.at(m.compounds[i], m.samples[j]);
      const char* fill = c == RecallCell::Provided ? "#3b6fd8" : c == RecallCell::Missed ? "#d83b3b" : "#5cb85c";
      doc.rect(left + cell * static_cast<double>(j), y, cell, cell, fill, "white",
               std::string(" data-state=\"") + to_string(c) + "\"");
    }
  }
  const double ly = top + cell * static_cast<double>(m.compounds.size()) + 20;
  double lx = left;
  for (auto c : {RecallCell::Provided, RecallCell::Missed, RecallCell::NotTruthed}) {
    const char* fill = c == RecallCell::Provided ? "#3b6fd8" : c == RecallCell::Missed ? "#d83b3b" : "#5cb85c";
    doc.rect(lx, ly - 10, 12, 12, fill);
    doc.text(lx + 16, ly, to_string(c), "start", 10);
    lx += 100;
  }
  return doc.str();
}

}  // namespace lunex::svg
