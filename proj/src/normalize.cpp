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

#include "lunex/normalize.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <map>

#include "lunex/format.hpp"
#include "lunex/interval_metrics.hpp"

namespace lunex {

const char* to_string(Unit u) noexcept {
  switch (u) {
    case Unit::Percent: return "percent";
    case Unit::Ppm: return "ppm";
    case Unit::Ppb: return "ppb";
  }
  return "?";
}

std::optional<Unit> unit_from_name(std::string_view name) noexcept {
  if (name == "percent") return Unit::Percent;
  if (name == "ppm") return Unit::Ppm;
  if (name == "ppb") return Unit::Ppb;
  return std::nullopt;
}

namespace {

constexpr std::pair<RepairFlag, const char*> kFlagNames[] = {
    {RepairFlag::SingleValueRepaired, "single-value-repaired"},
    {RepairFlag::BoundsSwapped, "bounds-swapped"},
    {RepairFlag::Inequality, "inequality"},
    {RepairFlag::SuspectCompound, "suspect-compound"},
    {RepairFlag::WideMerge, "wide-merge"},
};

}  // namespace

const char* to_string(RepairFlag f) noexcept {
  for (const auto& [flag, name] : kFlagNames) {
    if (flag == f) return name;
  }
  return "?";
}

std::optional<RepairFlag> flag_from_name(std::string_view name) noexcept {
  for (const auto& [flag, n] : kFlagNames) {
    if (name == n) return flag;
  }
  return std::nullopt;
}

std::string RecordKey::str() const {
  return compound + "/" + sample_id + "/" + to_string(unit);
}

SampleId normalize_sample_id(std::string_view raw) {
  SampleId out{{}, std::string(trim(raw))};
  for (char c : raw) {
    if (c >= '0' && c <= '9') out.id += c;
  }
  if (out.id.empty()) throw NormalizeError("unidentifiable sample id '" + out.original + "'");
  return out;
}

namespace {

// Major and minor oxides reported in lunar sample tables.
constexpr const char* kOxides[] = {
    "SiO2", "TiO2", "Al2O3", "Cr2O3", "FeO",  "Fe2O3", "MnO",  "MgO",  "CaO", "Na2O",
    "K2O",  "P2O5", "NiO",   "CoO",   "BaO",  "SrO",   "ZrO2", "V2O3", "H2O", "CO2",
    "SO3",  "ZnO",  "ThO2",  "UO2",   "Rb2O", "Cs2O",
};

constexpr const char* kElements[] = {
    "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg", "Al", "Si", "P",
    "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn",
    "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh",
    "Pd", "Ag", "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd",
    "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W",  "Re",
    "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th",
    "Pa", "U",  "Np", "Pu", "Am", "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db",
    "Sg", "Bh", "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og",
};

const std::map<std::string, std::string>& compound_table() {
  static const std::map<std::string, std::string> table = [] {
    std::map<std::string, std::string> t;
    for (const char* e : kElements) t.emplace(to_lower(e), e);
    for (const char* o : kOxides) t.emplace(to_lower(o), o);
    return t;
  }();
  return table;
}

// Folds "Al₂O₃", "Al<sub>2</sub>O<sub>3</sub>", "Al_2O_3" and "Al2 O3" to
// "al2o3".
std::string compound_lookup_key(std::string_view raw) {
  std::string s(trim(raw));
  for (std::string_view tag : {"<sub>", "</sub>", "<SUB>", "</SUB>"}) {
    for (size_t p; (p = s.find(tag)) != std::string::npos;) s.erase(p, tag.size());
  }
  std::string out;
  for (size_t i = 0; i < s.size(); ++i) {
    const auto c = static_cast<unsigned char>(s[i]);
    // U+2080..U+2089 subscript digits are E2 82 80..89 in UTF-8.
    if (c == 0xE2 && i + 2 < s.size() && static_cast<unsigned char>(s[i + 1]) == 0x82) {
      const auto d = static_cast<unsigned char>(s[i + 2]);
      if (d >= 0x80 && d <= 0x89) {
        out += static_cast<char>('0' + (d - 0x80));
        i += 2;
        continue;
      }
    }
    if (c == ' ' || c == '_' || c == '{' || c == '}' || c == '$') continue;
    out += static_cast<char>(std::tolower(c));
  }
  return out;
}

}  // namespace

CanonicalCompound canonicalize_compound(std::string_view raw) {
  const auto& table = compound_table();
  auto it = table.find(compound_lookup_key(raw));
  if (it != table.end()) return {it->second, false};
  return {std::string(trim(raw)), true};
}

Unit normalize_unit(std::string_view raw) {
  std::string key;
  for (char c : to_lower(trim(raw))) {
    if (c != ' ') key += c;
  }
  while (!key.empty() && (key.back() == ',' || key.back() == ';')) key.pop_back();
  if (key == "percent" || key == "%" || key == "wt%" || key == "wt.%") return Unit::Percent;
  if (key == "ppm") return Unit::Ppm;
  if (key == "ppb") return Unit::Ppb;
  throw NormalizeError("unrecognised unit '" + std::string(trim(raw)) + "'");
}

CompositionRecord normalize_record(const RawRecord& raw) {
  const SampleId sample = normalize_sample_id(raw.sample_raw);
  const CanonicalCompound compound = canonicalize_compound(raw.compound_raw);
  const Unit unit = normalize_unit(raw.unit_raw);
  const WeightParse weight = parse_weight(raw.weight_raw);

  CompositionRecord rec;
  rec.compound = compound.name;
  rec.sample_id = sample.id;
  rec.interval = weight.interval;
  rec.unit = unit;
  rec.provenance.insert({raw.provenance.doc_id, raw.provenance.chunk_index});
  if (compound.suspect) rec.flags.insert(RepairFlag::SuspectCompound);
  if (weight.single_value) rec.flags.insert(RepairFlag::SingleValueRepaired);
  if (weight.swapped) rec.flags.insert(RepairFlag::BoundsSwapped);
  if (weight.inequality) rec.flags.insert(RepairFlag::Inequality);
  rec.widest_input = metrics::length(rec.interval);
  return rec;
}

std::vector<CompositionRecord> dedupe_and_merge(std::vector<CompositionRecord> records,
                                                double wide_merge_factor) {
  std::map<RecordKey, CompositionRecord> groups;
  for (auto& rec : records) {
    auto [it, inserted] = groups.try_emplace(rec.key(), rec);
    if (inserted) continue;
    CompositionRecord& acc = it->second;
    acc.interval = acc.interval.hull(rec.interval);
    acc.provenance.insert(rec.provenance.begin(), rec.provenance.end());
    acc.flags.insert(rec.flags.begin(), rec.flags.end());
    acc.widest_input = std::max(acc.widest_input, rec.widest_input);
  }

  std::vector<CompositionRecord> out;
  out.reserve(groups.size());
  for (auto& [key, rec] : groups) {
    rec.flags.erase(RepairFlag::WideMerge);
    if (metrics::length(rec.interval) > wide_merge_factor * rec.widest_input) {
      rec.flags.insert(RepairFlag::WideMerge);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::string_view kRecordsHeader = "compound,sample_id,lo,hi,unit,flags,provenance";

std::string flags_field(const std::set<RepairFlag>& flags) {
  std::vector<std::string> names;
  for (auto f : flags) names.emplace_back(to_string(f));
  return join(names, ";");
}

std::string provenance_field(const std::set<Source>& sources) {
  std::vector<std::string> parts;
  for (const auto& s : sources) parts.push_back(s.doc_id + "#" + std::to_string(s.chunk_index));
  return join(parts, ";");
}

}  // namespace

std::string records_csv(const std::vector<CompositionRecord>& records) {
  std::string out(kRecordsHeader);
  out += '\n';
  for (const auto& r : records) {
    out += csv::row({r.compound, r.sample_id, format_number(r.interval.lo()),
                     format_number(r.interval.hi()), to_string(r.unit), flags_field(r.flags),
                     provenance_field(r.provenance)});
    out += '\n';
  }
  return out;
}

std::string records_json(const std::vector<CompositionRecord>& records) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json flags = nlohmann::ordered_json::array();
    for (auto f : r.flags) flags.push_back(to_string(f));
    nlohmann::ordered_json prov = nlohmann::ordered_json::array();
    for (const auto& s : r.provenance) prov.push_back({{"doc_id", s.doc_id}, {"chunk_index", s.chunk_index}});
    arr.push_back({{"compound", r.compound},
                   {"sample_id", r.sample_id},
                   {"lo", r.interval.lo()},
                   {"hi", r.interval.hi()},
                   {"unit", to_string(r.unit)},
                   {"flags", flags},
                   {"provenance", prov},
                   {"widest_input", r.widest_input}});
  }
  return arr.dump(2) + "\n";
}

std::vector<CompositionRecord> parse_records_csv(std::string_view text) {
  std::vector<CompositionRecord> out;
  size_t line_no = 0;
  bool header_seen = false;
  for (const auto& line : split(text, '\n')) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (!header_seen) {
      if (trim(line) != kRecordsHeader) {
        throw FormatError("records file line 1: expected header '" + std::string(kRecordsHeader) + "'", line_no);
      }
      header_seen = true;
      continue;
    }
    auto fail = [&](const std::string& why) {
      return FormatError("records file line " + std::to_string(line_no) + ": " + why, line_no);
    };
    const auto f = csv::parse_line(line);
    if (f.size() != 7) throw fail("expected 7 fields, found " + std::to_string(f.size()));
    CompositionRecord r;
    r.compound = f[0];
    r.sample_id = f[1];
    if (r.compound.empty()) throw fail("empty compound");
    if (r.sample_id.empty() || r.sample_id.find_first_not_of("0123456789") != std::string::npos) {
      throw fail("sample id '" + r.sample_id + "' is not all digits");
    }
    auto lo = parse_number(f[2]);
    auto hi = parse_number(f[3]);
    if (!lo || !hi) throw fail("non-numeric bound");
    if (*lo > *hi) throw fail("lower bound exceeds upper bound");
    r.interval = Interval(*lo, *hi);
    auto unit = unit_from_name(f[4]);
    if (!unit) throw fail("unknown unit '" + f[4] + "'");
    r.unit = *unit;
    if (!f[5].empty()) {
      for (const auto& name : split(f[5], ';')) {
        auto flag = flag_from_name(name);
        if (!flag) throw fail("unknown flag '" + name + "'");
        r.flags.insert(*flag);
      }
    }
    if (f[6].empty()) throw fail("empty provenance");
    for (const auto& src : split(f[6], ';')) {
      size_t hash = src.rfind('#');
      if (hash == std::string::npos) throw fail("bad provenance entry '" + src + "'");
      auto idx = parse_number(src.substr(hash + 1));
      if (!idx || *idx < 0) throw fail("bad provenance entry '" + src + "'");
      r.provenance.insert({src.substr(0, hash), static_cast<size_t>(*idx)});
    }
    r.widest_input = metrics::length(r.interval);
    out.push_back(std::move(r));
  }
  if (!header_seen) throw FormatError("records file is empty", 0);
  return out;
}

std::vector<CompositionRecord> load_records_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open records file " + path, 0);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_records_csv(data);
}

}  // namespace lunex
