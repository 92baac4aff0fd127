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

#include "lunex/response_parse.hpp"

#include <algorithm>
#include <cctype>

#include "lunex/format.hpp"

namespace lunex {

const char* to_string(IssueKind kind) noexcept {
  switch (kind) {
    case IssueKind::MalformedRow: return "malformed-row";
    case IssueKind::UnknownStructure: return "unknown-structure";
    case IssueKind::EmptyTable: return "empty-table";
  }
  return "unknown";
}

namespace {

bool is_markdown_rule(const std::vector<std::string>& cells) {
  bool any = false;
  for (const auto& c : cells) {
    auto t = trim(c);
    if (t.empty()) continue;
    if (t.find_first_not_of(":-") != std::string_view::npos) return false;
    if (t.find('-') == std::string_view::npos) return false;
    any = true;
  }
  return any;
}

std::vector<std::string> pipe_cells(std::string_view line) {
  line = trim(line);
  if (!line.empty() && line.front() == '|') line.remove_prefix(1);
  if (!line.empty() && line.back() == '|') line.remove_suffix(1);
  return split(line, '|');
}

bool is_header(const std::vector<std::string>& f) {
  if (f.size() < 4) return false;
  auto norm = [](std::string_view s) {
    std::string out;
    for (char c : to_lower(trim(s))) {
      if (c != ' ' && c != '_' && c != '-') out += c;
    }
    return out;
  };
  const std::string sample = norm(f[1]);
  const std::string unit = norm(f[3]);
  return norm(f[0]) == "compound" && (sample == "sampleid" || sample == "sample") &&
         norm(f[2]) == "weight" && (unit == "units" || unit == "unit");
}

bool plain_decimal(std::string_view s) {
  if (s.empty()) return false;
  int dots = 0;
  bool digit = false;
  for (char c : s) {
    if (c == '.') {
      if (++dots > 1) return false;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digit = true;
    } else {
      return false;
    }
  }
  return digit;
}

double decimal_or_throw(std::string_view s, std::string_view whole) {
  s = trim(s);
  if (!plain_decimal(s)) throw WeightParseError("non-numeric weight '" + std::string(whole) + "'");
  return *parse_number(s);
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

}  // namespace

WeightParse parse_weight(std::string_view weight_raw) {
  const std::string_view whole = trim(weight_raw);
  if (whole.empty()) throw WeightParseError("empty weight");

  for (std::string_view prefix : {"<=", "\xE2\x89\xA4", "&lt;", "<"}) {
    if (whole.rfind(prefix, 0) == 0) {
      WeightParse out{Interval(0.0, decimal_or_throw(whole.substr(prefix.size()), whole))};
      out.inequality = true;
      return out;
    }
  }

  std::string s(whole);
  s = replace_all(std::move(s), "\xE2\x80\x93", "-");  // en dash
  s = replace_all(std::move(s), "\xE2\x80\x94", "-");  // em dash
  const auto parts = split(s, '-');
  if (parts.size() == 1) {
    WeightParse out{Interval::point(decimal_or_throw(parts[0], whole))};
    out.single_value = true;
    return out;
  }
  if (parts.size() != 2) throw WeightParseError("unreadable range '" + std::string(whole) + "'");
  double a = decimal_or_throw(parts[0], whole);
  double b = decimal_or_throw(parts[1], whole);
  WeightParse out{Interval(std::min(a, b), std::max(a, b))};
  out.swapped = a > b;
  return out;
}

ParseResult parse_completion(std::string_view text, const Provenance& origin) {
  ParseResult result;
  size_t line_no = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw_line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;

    const std::string_view line = trim(raw_line);
    if (line.empty() || line.rfind("```", 0) == 0 || line.rfind("~~~", 0) == 0) {
      if (end == text.size()) break;
      continue;
    }

    std::vector<std::string> fields = csv::parse_line(line);
    if (line.front() == '|' || (fields.size() < 4 && line.find('|') != std::string_view::npos)) {
      fields = pipe_cells(line);
      if (is_markdown_rule(fields)) {
        if (end == text.size()) break;
        continue;
      }
    }
    for (auto& f : fields) f = std::string(trim(f));
    while (fields.size() > 1 && fields.back().empty()) fields.pop_back();

    if (is_header(fields)) {
      if (end == text.size()) break;
      continue;
    }

    ++result.data_lines;
    Provenance where = origin;
    where.line = line_no;
    auto issue = [&](IssueKind kind, std::string detail) {
      result.issues.push_back({where, std::string(line), kind, std::move(detail)});
    };

    if (fields.size() == 1) {
      issue(IssueKind::UnknownStructure, "not a table row");
    } else if (fields.size() < 4) {
      issue(IssueKind::MalformedRow, "expected 4 fields, found " + std::to_string(fields.size()));
    } else if (std::any_of(fields.begin(), fields.begin() + 4, [](const std::string& f) { return f.empty(); })) {
      issue(IssueKind::MalformedRow, "blank required field");
    } else {
      try {
        parse_weight(fields[2]);
        RawRecord rec{fields[0], fields[1], fields[2], fields[3], {}, where};
        std::vector<std::string> extra(fields.begin() + 4, fields.end());
        rec.annotation = join(extra, ", ");
        result.records.push_back(std::move(rec));
      } catch (const WeightParseError& e) {
        issue(IssueKind::MalformedRow, e.what());
      }
    }
    if (end == text.size()) break;
  }

  if (result.data_lines == 0) {
    Provenance where = origin;
    where.line = 0;
    result.issues.push_back({where, "", IssueKind::EmptyTable, "response contains no table rows"});
  }
  return result;
}

std::string to_table_row(const RawRecord& r) {
  auto field = [](const std::string& f) {
    if (f.find_first_of(",\"|") == std::string::npos) return f;
    std::string out = "\"";
    for (char c : f) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  };
  std::string out = field(r.compound_raw) + ", " + field(r.sample_raw) + ", " +
                    field(r.weight_raw) + ", " + field(r.unit_raw);
  if (!r.annotation.empty()) out += ", " + r.annotation;
  return out + ",";
}

}  // namespace lunex
