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

#include "lunex/interval_metrics.hpp"

#include <algorithm>
#include <cmath>

namespace lunex::metrics {

double length(const Interval& a) noexcept { return a.hi() - a.lo(); }

double midpoint(const Interval& a) noexcept { return a.lo() + (a.hi() - a.lo()) / 2.0; }

std::optional<Interval> intersection(const Interval& truth, const Interval& estimate) noexcept {
  const double lo = std::max(truth.lo(), estimate.lo());
  const double hi = std::min(truth.hi(), estimate.hi());
  if (lo > hi) return std::nullopt;
  return Interval(lo, hi);
}

double midpoint_abs_err(const Interval& truth, const Interval& estimate) noexcept {
  return std::fabs(midpoint(truth) - midpoint(estimate));
}

RelativeError midpoint_rel_err(const Interval& truth, const Interval& estimate,
                               double small_denominator) noexcept {
  RelativeError out;
  const double m_t = midpoint(truth);
  if (m_t == 0.0) return out;
  out.percent = 100.0 * midpoint_abs_err(truth, estimate) / std::fabs(m_t);
  out.small_denominator = std::fabs(m_t) < small_denominator;
  return out;
}

namespace {

// Share of `base` covered by `other`.
double coverage(const Interval& base, const Interval& other) noexcept {
  const double base_len = length(base);
  if (base_len == 0.0) return other.contains(midpoint(base)) ? 1.0 : 0.0;
  const auto common = intersection(base, other);
  if (!common) return 0.0;
  return std::clamp(length(*common) / base_len, 0.0, 1.0);
}

}  // namespace

double precision(const Interval& truth, const Interval& estimate) noexcept {
  return coverage(estimate, truth);
}

double recall(const Interval& truth, const Interval& estimate) noexcept {
  return coverage(truth, estimate);
}

}  // namespace lunex::metrics
