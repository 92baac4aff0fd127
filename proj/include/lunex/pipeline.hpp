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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lunex/corpus_analytics.hpp"
#include "lunex/corpus_ingest.hpp"
#include "lunex/evaluation.hpp"
#include "lunex/llm_gateway.hpp"
#include "lunex/normalize.hpp"
#include "lunex/response_parse.hpp"

namespace lunex {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,       // usage or configuration problem
  kExitInputFormat = 3,  // unreadable or malformed input
  kExitEndpoint = 4,     // model endpoint failure
};

struct ExtractOptions {
  std::filesystem::path corpus_dir;
  std::filesystem::path out_dir = "out";
  size_t chunk_chars = kDefaultChunkChars;
  char page_delimiter = kFormFeed;
  std::string model_id = kDefaultModel;
  double temperature = 0.0;
  bool standalone = false;
  size_t jobs = 1;
  double wide_merge_factor = kDefaultWideMergeFactor;
  /// Written into the manifest only.
  std::string cache_dir;
};

struct QuarantinedRow {
  RawRecord raw;
  std::string reason;
};

struct DocumentOutcome {
  std::string doc_id;
  size_t chunks = 0;
  size_t records = 0;  // after per-document merge
  size_t raw_rows = 0;
  size_t cache_hits = 0;
  std::vector<ParseIssue> issues;
  std::vector<QuarantinedRow> quarantined;
  std::optional<std::string> error;
  ExitCode error_class = kExitOk;
};

struct ExtractResult {
  std::vector<CompositionRecord> records;  // merged across the corpus
  std::vector<DocumentOutcome> documents;
  std::vector<FileError> file_errors;
  std::string manifest_json;

  size_t succeeded() const;
  /// kExitOk if any document succeeded, otherwise the dominant failure.
  ExitCode exit_code() const;
};

/// ingest → chunk → prompt → complete → parse → normalize → merge. Writes
/// records.csv, records.json, parse_issues.csv, quarantine.csv and
/// manifest.json into out_dir. Throws IngestError when the corpus itself
/// cannot be read.
/// `cache`, when given, only contributes statistics to the manifest.
ExtractResult run_extract(const ExtractOptions& options, LlmGateway& gateway, TokenBudget& budget,
                          const ReplayCache* cache = nullptr);

struct EvaluateOptions {
  std::filesystem::path records_path;
  std::filesystem::path truth_path;
  std::filesystem::path out_dir = "out";
  std::optional<Unit> unit;  // restrict both sides, e.g. percent = non-trace
  double small_denominator = metrics::kDefaultSmallDenominator;
};

struct EvaluateResult {
  std::vector<MatchResult> matches;
  std::vector<MetricRow> metrics;
  RecallMatrix matrix;
  std::map<std::string, SummaryReport> summaries;  // "<metric>_by_<group>"
};

/// Writes metrics.csv/json, matches.csv, recall_matrix.csv/json and
/// summaries.json. Throws FormatError on malformed inputs.
EvaluateResult run_evaluate(const EvaluateOptions& options);

struct AnalyzeOptions {
  std::filesystem::path records_path;
  std::filesystem::path out_dir = "out";
  size_t threshold = kDefaultMinOccurrence;
  size_t bins = kDefaultHistogramBins;
  std::optional<Unit> unit;
};

/// Writes analytics.json and distributions/<compound>_<unit>.csv.
AnalyticsReport run_analyze(const AnalyzeOptions& options);

/// Writes `content` to `path`, creating parent directories.
void write_file(const std::filesystem::path& path, std::string_view content);
std::string read_file_text(const std::filesystem::path& path);

}  // namespace lunex
