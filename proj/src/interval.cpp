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

#include "lunex/interval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lunex/format.hpp"

namespace lunex {

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("interval bounds must be finite");
  }
  if (lo > hi) {
    throw std::invalid_argument("interval lower bound " + format_number(lo) +
                                " exceeds upper bound " + format_number(hi));
  }
}

Interval Interval::hull(const Interval& other) const noexcept {
  Interval out;
  out.lo_ = std::min(lo_, other.lo_);
  out.hi_ = std::max(hi_, other.hi_);
  return out;
}

Interval Interval::scaled(double factor) const {
  if (factor < 0) return Interval(hi_ * factor, lo_ * factor);
  return Interval(lo_ * factor, hi_ * factor);
}

std::string Interval::str() const {
  return "[" + format_number(lo_) + ", " + format_number(hi_) + "]";
}

}  // namespace lunex
