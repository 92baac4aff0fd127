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
#include <string_view>
#include <vector>

namespace lunex {

/// Shortest decimal text that round-trips to the same double. Output is
/// identical across platforms, which keeps written files byte-stable.
std::string format_number(double value);

/// Strict decimal parse of the whole (trimmed) string.
std::optional<double> parse_number(std::string_view text);

std::string_view trim(std::string_view s) noexcept;
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b) noexcept;

std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

namespace csv {

/// Quotes a field only when it contains a separator, quote, or newline.
std::string escape(std::string_view field);
std::string row(const std::vector<std::string>& fields);

/// Splits one CSV line, honouring double-quoted fields.
std::vector<std::string> parse_line(std::string_view line);

}  // namespace csv

}  // namespace lunex
