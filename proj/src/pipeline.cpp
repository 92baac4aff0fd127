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

#include "lunex/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <map>
#include <thread>

#include "lunex/format.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace lunex {

void write_file(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("short write on " + path.string());
}

std::string read_file_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string(), 0);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

size_t ExtractResult::succeeded() const {
  return static_cast<size_t>(std::count_if(documents.begin(), documents.end(),
                                           [](const DocumentOutcome& d) { return !d.error; }));
}

ExitCode ExtractResult::exit_code() const {
  if (succeeded() > 0) return kExitOk;
  std::map<ExitCode, size_t> classes;
  for (const auto& d : documents) ++classes[d.error_class];
  if (classes.empty()) return kExitInputFormat;  // every file failed to load
  return std::max_element(classes.begin(), classes.end(),
                          [](const auto& a, const auto& b) { return a.second < b.second; })
      ->first;
}

namespace {

struct DocumentWork {
  DocumentOutcome outcome;
  std::vector<CompositionRecord> records;
};

void absorb(DocumentWork& work, const CompletionResponse& resp, const Provenance& origin) {
  if (resp.from_cache) ++work.outcome.cache_hits;
  ParseResult parsed = parse_completion(resp.text, origin);
  work.outcome.raw_rows += parsed.records.size();
  for (auto& issue : parsed.issues) work.outcome.issues.push_back(std::move(issue));
  for (auto& raw : parsed.records) {
    try {
      work.records.push_back(normalize_record(raw));
    } catch (const std::exception& e) {
      work.outcome.quarantined.push_back({std::move(raw), e.what()});
    }
  }
}

DocumentWork process_document(const DocumentText& doc, const ExtractOptions& opt, LlmGateway& gateway,
                              TokenBudget& budget) {
  DocumentWork work;
  work.outcome.doc_id = doc.doc_id;
  try {
    if (opt.standalone) {
      const SampleId sample = normalize_sample_id(doc.doc_id);
      const PromptRequest req = build_standalone_prompt(sample.id, opt.model_id, opt.temperature);
      absorb(work, gateway.complete(req, budget), Provenance{doc.doc_id, 0, 0});
    } else {
      const auto chunks = chunk_document(doc, opt.chunk_chars);
      work.outcome.chunks = chunks.size();
      for (const auto& chunk : chunks) {
        if (trim(chunk.text).empty()) continue;
        const PromptRequest req = build_extraction_prompt(chunk, opt.model_id, opt.temperature);
        absorb(work, gateway.complete(req, budget), Provenance{doc.doc_id, chunk.chunk_index, 0});
      }
    }
    work.records = dedupe_and_merge(std::move(work.records), opt.wide_merge_factor);
    work.outcome.records = work.records.size();
  } catch (const TransportError& e) {
    work.outcome.error = e.what();
    work.outcome.error_class = kExitEndpoint;
  } catch (const ConfigError& e) {
    work.outcome.error = e.what();
    work.outcome.error_class = kExitConfig;
  } catch (const std::exception& e) {
    work.outcome.error = e.what();
    work.outcome.error_class = kExitInputFormat;
  }
  if (work.outcome.error) work.records.clear();
  return work;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string issues_csv(const std::vector<DocumentOutcome>& docs) {
  std::string out = "doc_id,chunk_index,line,kind,detail,text\n";
  for (const auto& d : docs) {
    for (const auto& i : d.issues) {
      out += csv::row({i.provenance.doc_id, std::to_string(i.provenance.chunk_index),
                       std::to_string(i.provenance.line), to_string(i.kind), i.detail, i.line_text});
      out += '\n';
    }
  }
  return out;
}

std::string quarantine_csv(const std::vector<DocumentOutcome>& docs) {
  std::string out = "doc_id,chunk_index,line,compound_raw,sample_raw,weight_raw,unit_raw,reason\n";
  for (const auto& d : docs) {
    for (const auto& q : d.quarantined) {
      const auto& r = q.raw;
      out += csv::row({r.provenance.doc_id, std::to_string(r.provenance.chunk_index),
                       std::to_string(r.provenance.line), r.compound_raw, r.sample_raw, r.weight_raw,
                       r.unit_raw, q.reason});
      out += '\n';
    }
  }
  return out;
}

}  // namespace

ExtractResult run_extract(const ExtractOptions& opt, LlmGateway& gateway, TokenBudget& budget,
                          const ReplayCache* cache) {
  if (opt.chunk_chars == 0) throw ConfigError("--chunk-chars must be positive");
  Corpus corpus = load_corpus(opt.corpus_dir, opt.page_delimiter);

  std::vector<DocumentWork> work(corpus.documents.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < corpus.documents.size(); i = next++) {
      work[i] = process_document(corpus.documents[i], opt, gateway, budget);
    }
  };
  const size_t jobs = std::clamp<size_t>(opt.jobs, 1, std::max<size_t>(corpus.documents.size(), 1));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  ExtractResult result;
  result.file_errors = corpus.errors;
  std::vector<CompositionRecord> all;
  for (auto& w : work) {
    for (auto& r : w.records) all.push_back(std::move(r));
    result.documents.push_back(std::move(w.outcome));
  }
  result.records = dedupe_and_merge(std::move(all), opt.wide_merge_factor);

  const GatewayStats gs = gateway.stats();
  ojson docs = ojson::array();
  size_t total_issues = 0, total_quarantined = 0;
  for (const auto& d : result.documents) {
    total_issues += d.issues.size();
    total_quarantined += d.quarantined.size();
    docs.push_back({{"doc_id", d.doc_id},
                    {"status", d.error ? "failed" : "ok"},
                    {"chunks", d.chunks},
                    {"raw_rows", d.raw_rows},
                    {"records", d.records},
                    {"parse_issues", d.issues.size()},
                    {"quarantined", d.quarantined.size()},
                    {"cache_hits", d.cache_hits},
                    {"error", d.error ? ojson(*d.error) : ojson(nullptr)}});
  }
  ojson file_errors = ojson::array();
  for (const auto& e : corpus.errors) file_errors.push_back({{"file", e.file.filename().string()}, {"error", e.message}});
  ojson cache_stats = {{"dir", opt.cache_dir}, {"hits", gs.cache_hits}, {"network_calls", gs.network_calls},
                       {"retries", gs.retries}};
  if (cache) {
    const CacheStats cs = cache->stats();
    cache_stats["stores"] = cs.stores;
    cache_stats["corrupt_entries"] = cs.corrupt;
  }
  ojson manifest = {
      {"timestamp", utc_timestamp()},
      {"mode", opt.standalone ? "standalone" : "with-doc"},
      {"model_id", opt.model_id},
      {"temperature", opt.temperature},
      {"chunking", {{"max_chunk_chars", opt.chunk_chars}, {"page_delimiter", static_cast<int>(static_cast<unsigned char>(opt.page_delimiter))}}},
      {"corpus_dir", opt.corpus_dir.string()},
      {"cache", cache_stats},
      {"tokens", {{"prompt", gs.prompt_tokens}, {"completion", gs.completion_tokens}}},
      {"documents", docs},
      {"file_errors", file_errors},
      {"totals",
       {{"documents", result.documents.size()},
        {"succeeded", result.succeeded()},
        {"records", result.records.size()},
        {"parse_issues", total_issues},
        {"quarantined", total_quarantined}}},
  };
  result.manifest_json = manifest.dump(2) + "\n";

  write_file(opt.out_dir / "records.csv", records_csv(result.records));
  write_file(opt.out_dir / "records.json", records_json(result.records));
  write_file(opt.out_dir / "parse_issues.csv", issues_csv(result.documents));
  write_file(opt.out_dir / "quarantine.csv", quarantine_csv(result.documents));
  write_file(opt.out_dir / "manifest.json", result.manifest_json);
  return result;
}

EvaluateResult run_evaluate(const EvaluateOptions& opt) {
  auto records = parse_records_csv(read_file_text(opt.records_path));
  auto truth = parse_ground_truth(read_file_text(opt.truth_path));
  if (opt.unit) {
    records = filter_unit(std::move(records), *opt.unit);
    truth = filter_unit(std::move(truth), *opt.unit);
  }
  EvaluateResult result;
  result.matches = join_records(records, truth);
  result.metrics = compute_metrics(result.matches, opt.small_denominator);
  result.matrix = recall_matrix(result.matches);
  for (auto metric : {Metric::AbsErr, Metric::RelErr, Metric::Precision, Metric::Recall}) {
    for (auto by : {GroupBy::Sample, GroupBy::Compound}) {
      const std::string name = std::string(to_string(metric)) + "_by_" + (by == GroupBy::Sample ? "sample" : "compound");
      result.summaries[name] = summarize(result.metrics, metric, by);
    }
  }
  write_file(opt.out_dir / "metrics.csv", metrics_csv(result.metrics));
  write_file(opt.out_dir / "metrics.json", metrics_json(result.metrics));
  write_file(opt.out_dir / "matches.csv", matches_csv(result.matches));
  write_file(opt.out_dir / "recall_matrix.csv", recall_matrix_csv(result.matrix));
  write_file(opt.out_dir / "recall_matrix.json", recall_matrix_json(result.matrix));
  write_file(opt.out_dir / "summaries.json", summaries_json(result.summaries));
  return result;
}

namespace {

std::string file_safe(std::string_view name) {
  std::string out;
  for (char c : name) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-') ? c : '_';
  return out;
}

}  // namespace

AnalyticsReport run_analyze(const AnalyzeOptions& opt) {
  auto records = parse_records_csv(read_file_text(opt.records_path));
  if (opt.unit) records = filter_unit(std::move(records), *opt.unit);
  AnalyticsReport report = analyze_corpus(records, opt.threshold, opt.bins);
  write_file(opt.out_dir / "analytics.json", analytics_json(report));
  for (const auto& d : report.distributions) {
    const std::string unit = d.unit ? to_string(*d.unit) : "any";
    write_file(opt.out_dir / "distributions" / (file_safe(d.compound) + "_" + unit + ".csv"), distribution_csv(d));
  }
  return report;
}

}  // namespace lunex
