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

#include "lunex/corpus_ingest.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "lunex/format.hpp"

namespace fs = std::filesystem;

namespace lunex {

size_t DocumentText::total_chars() const noexcept {
  size_t n = 0;
  for (const auto& p : pages) n += p.size();
  return n;
}

DocumentText split_pages(std::string doc_id, std::string_view text, char page_delimiter) {
  if (doc_id.empty()) throw IngestError("document id is empty");
  if (trim(text).empty() ||
      text.find_first_not_of(std::string{page_delimiter} + " \t\r\n") == std::string_view::npos) {
    throw IngestError("document '" + doc_id + "' has no extractable text");
  }
  DocumentText doc{std::move(doc_id), split(text, page_delimiter)};
  // Extractors commonly terminate every page with the delimiter.
  if (doc.pages.size() > 1 && doc.pages.back().empty()) doc.pages.pop_back();
  return doc;
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IngestError("read failure on " + path.string());
  return data;
}

bool recognised(const fs::path& p) {
  auto ext = to_lower(p.extension().string());
  return ext == ".txt" || ext == ".pdf";
}

}  // namespace

Corpus load_corpus(const fs::path& dir, char page_delimiter) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw IngestError("corpus directory " + dir.string() + " does not exist or is not a directory");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && recognised(entry.path())) files.push_back(entry.path());
  }
  if (ec) throw IngestError("cannot list " + dir.string() + ": " + ec.message());
  if (files.empty()) throw IngestError("corpus directory " + dir.string() + " contains no .txt or .pdf files");
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return a.stem().string() != b.stem().string() ? a.stem().string() < b.stem().string()
                                                  : a.extension() < b.extension();
  });

  Corpus corpus;
  std::set<std::string> seen;
  for (const auto& file : files) {
    const std::string stem = file.stem().string();
    if (seen.count(stem)) {
      corpus.errors.push_back({file, "duplicate document id '" + stem + "'"});
      continue;
    }
    try {
      DocumentText doc = to_lower(file.extension().string()) == ".pdf"
                             ? extract_pdf_text(file)
                             : split_pages(stem, read_file(file), page_delimiter);
      doc.doc_id = stem;
      seen.insert(stem);
      corpus.documents.push_back(std::move(doc));
    } catch (const std::exception& e) {
      corpus.errors.push_back({file, e.what()});
    }
  }
  return corpus;
}

std::vector<DocumentChunk> chunk_document(const DocumentText& doc, size_t max_chunk_chars) {
  if (max_chunk_chars == 0) throw std::invalid_argument("max_chunk_chars must be positive");
  std::vector<DocumentChunk> chunks;
  DocumentChunk cur;
  bool open = false;
  for (size_t i = 0; i < doc.pages.size(); ++i) {
    const std::string& page = doc.pages[i];
    if (open && cur.text.size() + page.size() > max_chunk_chars) {
      chunks.push_back(std::move(cur));
      cur = DocumentChunk{};
      open = false;
    }
    if (!open) {
      cur.doc_id = doc.doc_id;
      cur.chunk_index = chunks.size();
      cur.first_page = i + 1;
      open = true;
    }
    cur.text += page;
    cur.last_page = i + 1;
  }
  if (open) chunks.push_back(std::move(cur));
  return chunks;
}

}  // namespace lunex
