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

namespace lunex {

/// Closed interval [lo, hi] of the reals. Degenerate intervals (lo == hi)
/// are permitted; an inverted or non-finite pair is rejected at construction.
class Interval {
 public:
  Interval() = default;
  Interval(double lo, double hi);

  static Interval point(double v) { return Interval(v, v); }

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

  bool degenerate() const noexcept { return lo_ == hi_; }
  bool contains(double x) const noexcept { return lo_ <= x && x <= hi_; }
  bool contains(const Interval& other) const noexcept {
    return lo_ <= other.lo_ && other.hi_ <= hi_;
  }

  /// Smallest interval containing both operands.
  Interval hull(const Interval& other) const noexcept;

  Interval shifted(double offset) const { return Interval(lo_ + offset, hi_ + offset); }
  Interval scaled(double factor) const;

  friend bool operator==(const Interval&, const Interval&) = default;

  std::string str() const;

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

}  // namespace lunex
