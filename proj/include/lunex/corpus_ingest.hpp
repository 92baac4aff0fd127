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

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lunex {

inline constexpr char kFormFeed = '\f';
inline constexpr size_t kDefaultChunkChars = 25000;

/// Text of one source document, one string per page.
struct DocumentText {
  std::string doc_id;
  std::vector<std::string> pages;

  size_t total_chars() const noexcept;
};

/// A run of whole consecutive pages from one document. Page ordinals are
/// 1-based and inclusive.
struct DocumentChunk {
  std::string doc_id;
  size_t chunk_index = 0;
  size_t first_page = 0;
  size_t last_page = 0;
  std::string text;

  friend bool operator==(const DocumentChunk&, const DocumentChunk&) = default;
};

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FileError {
  std::filesystem::path file;
  std::string message;
};

struct Corpus {
  std::vector<DocumentText> documents;  // sorted by doc_id
  std::vector<FileError> errors;
};

/// Splits raw text on the page delimiter. Throws IngestError when the text
/// is empty.
DocumentText split_pages(std::string doc_id, std::string_view text, char page_delimiter = kFormFeed);

/// Loads every ".txt" (and ".pdf") file in `dir`. Per-file failures are
/// collected in Corpus::errors; a missing directory or one without any
/// recognised file throws IngestError.
Corpus load_corpus(const std::filesystem::path& dir, char page_delimiter = kFormFeed);

/// Greedy page packing: a page joins the current chunk unless that would
/// push the chunk past `max_chunk_chars`. A page longer than the limit is
/// emitted alone and never split.
std::vector<DocumentChunk> chunk_document(const DocumentText& doc,
                                          size_t max_chunk_chars = kDefaultChunkChars);

/// Minimal PDF text-layer reader: one string per page, in page order.
/// Handles uncompressed and Flate-compressed content streams with literal
/// and hex string operands of Tj/TJ/'/". Throws IngestError for unreadable,
/// encrypted, or text-less files.
DocumentText extract_pdf_text(const std::filesystem::path& pdf);

}  // namespace lunex
