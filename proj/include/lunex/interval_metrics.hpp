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

#include "lunex/interval.hpp"

namespace lunex::metrics {

/// Midpoints at or above this value (in percent units) are considered large
/// enough for the relative error to be meaningful.
inline constexpr double kDefaultSmallDenominator = 0.5;

double length(const Interval& a) noexcept;
double midpoint(const Interval& a) noexcept;

std::optional<Interval> intersection(const Interval& truth, const Interval& estimate) noexcept;

/// |m_T - m_E|
double midpoint_abs_err(const Interval& truth, const Interval& estimate) noexcept;

struct RelativeError {
  /// 100 * |m_T - m_E| / m_T; absent when m_T == 0.
  std::optional<double> percent;
  /// Set when m_T is below the small-denominator threshold, where the
  /// ratio is dominated by the denominator.
  bool small_denominator = false;
};

RelativeError midpoint_rel_err(const Interval& truth, const Interval& estimate,
                               double small_denominator = kDefaultSmallDenominator) noexcept;

// Precision is |T ∩ E| / |E| and recall |T ∩ E| / |T|. A zero-length
// denominator falls back to membership of that interval's midpoint in the
// other interval, so both are total on valid intervals.
double precision(const Interval& truth, const Interval& estimate) noexcept;
double recall(const Interval& truth, const Interval& estimate) noexcept;

}  // namespace lunex::metrics
