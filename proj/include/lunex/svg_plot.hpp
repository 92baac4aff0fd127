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

#include <optional>
#include <string>
#include <vector>

#include "lunex/evaluation.hpp"
#include "lunex/normalize.hpp"

namespace lunex::svg {

struct IntervalSeries {
  std::string label;
  std::string color;
  std::vector<CompositionRecord> records;
};

/// One panel per compound, samples along x, one vertical bar per series
/// and sample. Intervals shorter than `min_bar_px` draw as an hourglass
/// marker so they stay visible. Throws std::invalid_argument when there is
/// nothing to draw.
std::string interval_plot(const std::vector<GroundTruthEntry>& truth,
                          const std::vector<IntervalSeries>& estimates,
                          const std::vector<std::string>& compounds, Unit unit,
                          double min_bar_px = 3.0);

/// Horizontal box plots, one per group, with every score overlaid as a dot.
std::string box_plot(const SummaryReport& report, const std::vector<MetricRow>& rows, Metric metric,
                     GroupBy by);

/// Tri-state presence grid.
std::string matrix_plot(const RecallMatrix& matrix);

}  // namespace lunex::svg
