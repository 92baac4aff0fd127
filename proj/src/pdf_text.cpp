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

#include <zlib.h>

#include <cctype>
#include <charconv>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <regex>
#include <set>

#include "lunex/corpus_ingest.hpp"
#include "lunex/format.hpp"

namespace fs = std::filesystem;

namespace lunex {

namespace {

struct PdfObject {
  std::string dict;    // text before "stream", or the whole body
  std::string stream;  // raw (still encoded) stream bytes
  bool has_stream = false;
};

std::optional<std::string> inflate_bytes(std::string_view in) {
  z_stream zs{};
  if (inflateInit(&zs) != Z_OK) return std::nullopt;
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  std::string out;
  char buf[16384];
  int rc = Z_OK;
  while (rc == Z_OK) {
    zs.next_out = reinterpret_cast<Bytef*>(buf);
    zs.avail_out = sizeof(buf);
    rc = inflate(&zs, Z_NO_FLUSH);
    out.append(buf, sizeof(buf) - zs.avail_out);
    if (rc == Z_BUF_ERROR && zs.avail_in == 0) break;
  }
  inflateEnd(&zs);
  if (rc != Z_STREAM_END && rc != Z_BUF_ERROR) return std::nullopt;
  return out;
}

std::optional<long> int_after(std::string_view dict, std::string_view key) {
  size_t pos = dict.find(key);
  while (pos != std::string_view::npos) {
    size_t end = pos + key.size();
    // Reject prefixes of longer names ("/Type" inside "/Types").
    if (end < dict.size() && std::isalnum(static_cast<unsigned char>(dict[end]))) {
      pos = dict.find(key, end);
      continue;
    }
    while (end < dict.size() && std::isspace(static_cast<unsigned char>(dict[end]))) ++end;
    long v = 0;
    auto r = std::from_chars(dict.data() + end, dict.data() + dict.size(), v);
    if (r.ec == std::errc()) return v;
    return std::nullopt;
  }
  return std::nullopt;
}

// Object references ("12 0 R") following `key`, either a single reference
// or an array of them.
std::vector<long> refs_after(std::string_view dict, std::string_view key) {
  std::vector<long> out;
  size_t pos = dict.find(key);
  if (pos == std::string_view::npos) return out;
  size_t start = pos + key.size();
  while (start < dict.size() && std::isspace(static_cast<unsigned char>(dict[start]))) ++start;
  std::string_view rest = dict.substr(start);
  if (!rest.empty() && rest.front() == '[') {
    rest = rest.substr(1, rest.find(']') == std::string_view::npos ? rest.size() - 1 : rest.find(']') - 1);
  } else {
    size_t r = rest.find('R');
    rest = rest.substr(0, r == std::string_view::npos ? 0 : r + 1);
  }
  static const std::regex ref_re(R"((\d+)\s+\d+\s+R)");
  std::string s(rest);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), ref_re); it != std::sregex_iterator(); ++it) {
    out.push_back(std::stol((*it)[1].str()));
  }
  return out;
}

bool is_type(std::string_view dict, std::string_view type) {
  static const std::regex type_re(R"(/Type\s*/([A-Za-z]+))");
  std::string s(dict);
  std::smatch m;
  return std::regex_search(s, m, type_re) && m[1].str() == type;
}

class PdfFile {
 public:
  explicit PdfFile(std::string data) : data_(std::move(data)) { index_objects(); }

  const std::map<long, PdfObject>& objects() const { return objects_; }

  std::optional<std::string> decoded_stream(const PdfObject& obj) const {
    if (!obj.has_stream) return std::nullopt;
    if (obj.dict.find("/Filter") == std::string::npos) return obj.stream;
    if (obj.dict.find("/FlateDecode") != std::string::npos) return inflate_bytes(obj.stream);
    return std::nullopt;  // unsupported filter
  }

  std::vector<long> page_order() const {
    std::vector<long> pages;
    std::set<long> visited;
    for (const auto& [num, obj] : objects_) {
      if (is_type(obj.dict, "Catalog")) {
        for (long root : refs_after(obj.dict, "/Pages")) walk(root, pages, visited);
        break;
      }
    }
    if (pages.empty()) {
      for (const auto& [num, obj] : objects_) {
        if (is_type(obj.dict, "Page")) pages.push_back(num);
      }
    }
    return pages;
  }

 private:
  void walk(long num, std::vector<long>& pages, std::set<long>& visited) const {
    if (!visited.insert(num).second) return;
    auto it = objects_.find(num);
    if (it == objects_.end()) return;
    const auto& dict = it->second.dict;
    if (is_type(dict, "Pages")) {
      for (long kid : refs_after(dict, "/Kids")) walk(kid, pages, visited);
    } else if (is_type(dict, "Page")) {
      pages.push_back(num);
    }
  }

  void index_objects() {
    static const std::regex obj_re(R"((\d+)\s+(\d+)\s+obj\b)");
    auto begin = std::sregex_iterator(data_.begin(), data_.end(), obj_re);
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
      long num = std::stol((*it)[1].str());
      size_t body_start = static_cast<size_t>(it->position() + it->length());
      size_t end = data_.find("endobj", body_start);
      if (end == std::string::npos) continue;
      PdfObject obj;
      size_t s = data_.find("stream", body_start);
      if (s != std::string::npos && s < end && data_.compare(s - 3, 3, "end") != 0) {
        obj.dict = data_.substr(body_start, s - body_start);
        size_t data_start = s + 6;
        if (data_start < data_.size() && data_[data_start] == '\r') ++data_start;
        if (data_start < data_.size() && data_[data_start] == '\n') ++data_start;
        size_t data_end;
        auto len = int_after(obj.dict, "/Length");
        if (len && refs_after(obj.dict, "/Length").empty() && data_start + *len <= data_.size()) {
          data_end = data_start + static_cast<size_t>(*len);
          end = data_.find("endobj", data_end);
          if (end == std::string::npos) continue;
        } else {
          data_end = data_.find("endstream", data_start);
          if (data_end == std::string::npos) continue;
          end = data_.find("endobj", data_end);
          if (end == std::string::npos) continue;
        }
        obj.stream = data_.substr(data_start, data_end - data_start);
        obj.has_stream = true;
      } else {
        obj.dict = data_.substr(body_start, end - body_start);
      }
      objects_[num] = std::move(obj);
    }
    expand_object_streams();
  }

  // PDF 1.5 packs many objects into compressed object streams.
  void expand_object_streams() {
    std::vector<std::pair<long, std::string>> found;
    for (const auto& [num, obj] : objects_) {
      if (!obj.has_stream || !is_type(obj.dict, "ObjStm")) continue;
      auto n = int_after(obj.dict, "/N");
      auto first = int_after(obj.dict, "/First");
      auto body = decoded_stream(obj);
      if (!n || !first || !body || *first > static_cast<long>(body->size())) continue;
      std::vector<long> header;
      std::string_view head(body->data(), static_cast<size_t>(*first));
      for (const auto& tok : split(head, ' ')) {
        for (const auto& t : split(tok, '\n')) {
          auto v = trim(t);
          if (v.empty()) continue;
          long x = 0;
          if (std::from_chars(v.data(), v.data() + v.size(), x).ec == std::errc()) header.push_back(x);
        }
      }
      for (size_t i = 0; i + 1 < header.size() && i / 2 < static_cast<size_t>(*n); i += 2) {
        size_t off = static_cast<size_t>(*first + header[i + 1]);
        size_t next = (i + 3 < header.size()) ? static_cast<size_t>(*first + header[i + 3]) : body->size();
        if (off > body->size() || next > body->size() || next < off) continue;
        found.emplace_back(header[i], body->substr(off, next - off));
      }
    }
    for (auto& [num, text] : found) {
      if (!objects_.count(num)) objects_[num] = PdfObject{std::move(text), {}, false};
    }
  }

  std::string data_;
  std::map<long, PdfObject> objects_;
};

// Pulls show-text operands out of a content stream.
class ContentScanner {
 public:
  explicit ContentScanner(std::string_view s) : s_(s) {}

  std::string run() {
    std::vector<std::string> operands;  // pending string operands
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '%') {
        while (pos_ < s_.size() && s_[pos_] != '\n' && s_[pos_] != '\r') ++pos_;
      } else if (c == '(') {
        operands.push_back(literal());
      } else if (c == '<' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '<') {
        pos_ += 2;
      } else if (c == '>' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '>') {
        pos_ += 2;
      } else if (c == '<') {
        operands.push_back(hex());
      } else if (c == '[') {
        ++pos_;
        operands.push_back(array());
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '\'' || c == '"' || c == '*') {
        size_t start = pos_;
        while (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) ||
                                    s_[pos_] == '*' || s_[pos_] == '\'' || s_[pos_] == '"')) {
          ++pos_;
        }
        op(s_.substr(start, pos_ - start), operands);
        operands.clear();
      } else {
        ++pos_;
      }
    }
    return out_;
  }

 private:
  void newline() {
    if (!out_.empty() && out_.back() != '\n') out_ += '\n';
  }

  void op(std::string_view name, const std::vector<std::string>& operands) {
    if (name == "Tj" || name == "TJ") {
      if (!operands.empty()) out_ += operands.back();
    } else if (name == "'" || name == "\"") {
      newline();
      if (!operands.empty()) out_ += operands.back();
    } else if (name == "Td" || name == "TD" || name == "T*" || name == "ET") {
      newline();
    }
  }

  std::string literal() {
    ++pos_;
    std::string out;
    int depth = 1;
    while (pos_ < s_.size()) {
      char c = s_[pos_++];
      if (c == '\\' && pos_ < s_.size()) {
        char e = s_[pos_++];
        switch (e) {
          case 'n': out += '\n'; break;
          case 'r': out += '\r'; break;
          case 't': out += '\t'; break;
          case 'b': out += '\b'; break;
          case 'f': out += '\f'; break;
          case '\r':
            if (pos_ < s_.size() && s_[pos_] == '\n') ++pos_;
            break;
          case '\n': break;
          default:
            if (e >= '0' && e <= '7') {
              int v = e - '0';
              for (int k = 0; k < 2 && pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '7'; ++k) {
                v = v * 8 + (s_[pos_++] - '0');
              }
              out += static_cast<char>(v);
            } else {
              out += e;
            }
        }
      } else if (c == '(') {
        ++depth;
        out += c;
      } else if (c == ')') {
        if (--depth == 0) break;
        out += c;
      } else {
        out += c;
      }
    }
    return out;
  }

  std::string hex() {
    ++pos_;
    std::string digits;
    while (pos_ < s_.size() && s_[pos_] != '>') {
      if (std::isxdigit(static_cast<unsigned char>(s_[pos_]))) digits += s_[pos_];
      ++pos_;
    }
    ++pos_;
    if (digits.size() % 2) digits += '0';
    std::string out;
    for (size_t i = 0; i < digits.size(); i += 2) {
      out += static_cast<char>(std::stoi(digits.substr(i, 2), nullptr, 16));
    }
    return out;
  }

  // TJ array: strings concatenated; a large negative kern reads as a space.
  std::string array() {
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != ']') {
      char c = s_[pos_];
      if (c == '(') {
        out += literal();
      } else if (c == '<') {
        out += hex();
      } else if (c == '-' || c == '.' || std::isdigit(static_cast<unsigned char>(c))) {
        size_t start = pos_;
        while (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '.' ||
                                    std::isdigit(static_cast<unsigned char>(s_[pos_])))) {
          ++pos_;
        }
        auto v = parse_number(s_.substr(start, pos_ - start));
        if (v && *v < -200) out += ' ';
      } else {
        ++pos_;
      }
    }
    ++pos_;
    return out;
  }

  std::string_view s_;
  size_t pos_ = 0;
  std::string out_;
};

}  // namespace

DocumentText extract_pdf_text(const fs::path& pdf) {
  std::ifstream in(pdf, std::ios::binary);
  if (!in) throw IngestError("cannot open " + pdf.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (data.compare(0, 5, "%PDF-") != 0) throw IngestError(pdf.string() + ": not a PDF file");
  if (data.find("/Encrypt") != std::string::npos) throw IngestError(pdf.string() + ": encrypted PDF");

  PdfFile file(std::move(data));
  const auto order = file.page_order();
  if (order.empty()) throw IngestError(pdf.string() + ": corrupt PDF (no pages found)");

  DocumentText doc;
  doc.doc_id = pdf.stem().string();
  bool any_text = false;
  for (long page_num : order) {
    std::string text;
    const auto& page = file.objects().at(page_num);
    for (long ref : refs_after(page.dict, "/Contents")) {
      auto it = file.objects().find(ref);
      if (it == file.objects().end()) continue;
      if (auto body = file.decoded_stream(it->second)) text += ContentScanner(*body).run();
    }
    if (!trim(text).empty()) any_text = true;
    doc.pages.push_back(std::move(text));
  }
  if (!any_text) throw IngestError(pdf.string() + ": PDF has no extractable text layer");
  return doc;
}

}  // namespace lunex
