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

// lunex: extract composition intervals from a document corpus with an LLM
// and score them against interval-valued ground truth.

#include <CLI11.hpp>

#include <iostream>
#include <memory>

#include "lunex/pipeline.hpp"
#include "lunex/svg_plot.hpp"

namespace fs = std::filesystem;
using namespace lunex;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

char parse_delimiter(const std::string& s) {
  if (s == "\\f" || s == "formfeed" || s == "ff") return '\f';
  if (s == "\\n") return '\n';
  if (s.size() == 1) return s[0];
  throw UsageError("--page-delimiter must be a single character, \\f, or \\n");
}

std::optional<Unit> parse_units(const std::string& s) {
  if (s.empty() || s == "all") return std::nullopt;
  if (auto u = unit_from_name(s)) return u;
  throw UsageError("--units must be percent, ppm, ppb, or all");
}

int run(int argc, char** argv) {
  CLI::App app{"Composition interval extraction and evaluation toolkit", "lunex"};
  app.require_subcommand(1);

  // extract
  ExtractOptions ex;
  std::string delimiter = "\\f";
  std::string cache_dir = ".lunex-cache";
  int max_attempts = 5;
  uint64_t tokens_per_minute = 30000;
  bool offline = false;
  auto* extract = app.add_subcommand("extract", "Run the LLM extraction pipeline over a corpus");
  extract->add_option("--corpus-dir", ex.corpus_dir, "Directory of .txt (form-feed paged) or .pdf files")->required();
  extract->add_option("--out-dir", ex.out_dir, "Output directory")->capture_default_str();
  extract->add_option("--chunk-chars", ex.chunk_chars, "Maximum characters per chunk")->capture_default_str();
  extract->add_option("--page-delimiter", delimiter, "Page delimiter character")->capture_default_str();
  extract->add_option("--model", ex.model_id, "Model identifier")->capture_default_str();
  extract->add_option("--temperature", ex.temperature, "Sampling temperature")->capture_default_str()->check(CLI::NonNegativeNumber);
  extract->add_option("--cache-dir", cache_dir, "Replay cache directory")->capture_default_str();
  extract->add_option("--max-attempts", max_attempts, "Attempts per request")->capture_default_str()->check(CLI::PositiveNumber);
  extract->add_option("--tokens-per-minute", tokens_per_minute, "Token budget (0 = unlimited)")->capture_default_str();
  extract->add_option("--jobs", ex.jobs, "Documents processed concurrently")->capture_default_str()->check(CLI::PositiveNumber);
  extract->add_option("--wide-merge-factor", ex.wide_merge_factor, "Envelope/input length ratio that flags a merge")->capture_default_str();
  extract->add_flag("--standalone", ex.standalone, "Ask about each sample id without document text");
  extract->add_flag("--offline", offline, "Serve only from the replay cache");

  // evaluate
  EvaluateOptions ev;
  std::string eval_units;
  auto* evaluate = app.add_subcommand("evaluate", "Score extracted records against ground truth");
  evaluate->add_option("--records", ev.records_path, "records.csv from extract")->required();
  evaluate->add_option("--truth", ev.truth_path, "Ground-truth CSV")->required();
  evaluate->add_option("--out-dir", ev.out_dir, "Output directory")->capture_default_str();
  evaluate->add_option("--units", eval_units, "Restrict to one unit (percent = non-trace)");
  evaluate->add_option("--small-denominator", ev.small_denominator, "Relative-error sensitivity threshold")->capture_default_str();

  // analyze
  AnalyzeOptions an;
  std::string analyze_units;
  auto* analyze = app.add_subcommand("analyze", "Corpus-wide compound frequencies and interval distributions");
  analyze->add_option("--records", an.records_path, "records.csv from extract")->required();
  analyze->add_option("--out-dir", an.out_dir, "Output directory")->capture_default_str();
  analyze->add_option("--threshold", an.threshold, "Compounds seen this often or less are discarded")->capture_default_str();
  analyze->add_option("--bins", an.bins, "Histogram bins")->capture_default_str()->check(CLI::PositiveNumber);
  analyze->add_option("--units", analyze_units, "Restrict to one unit");

  // plot
  std::string kind;
  fs::path out_file;
  fs::path truth_path, records_path, standalone_path, metrics_path, matrix_path;
  std::vector<std::string> compounds;
  std::string plot_units = "percent";
  std::string metric_name = "precision";
  std::string group_name = "sample";
  auto* plot = app.add_subcommand("plot", "Render SVG figures");
  plot->add_option("--kind", kind, "intervals | box | matrix")->required();
  plot->add_option("--out", out_file, "Output SVG path")->required();
  plot->add_option("--truth", truth_path, "Ground-truth CSV (intervals, matrix)");
  plot->add_option("--records", records_path, "With-document records.csv (intervals, matrix)");
  plot->add_option("--standalone-records", standalone_path, "Standalone records.csv (intervals)");
  plot->add_option("--compound", compounds, "Compound panel(s); default: every truthed compound");
  plot->add_option("--units", plot_units, "Unit to plot (intervals)")->capture_default_str();
  plot->add_option("--metrics", metrics_path, "metrics.csv from evaluate (box)");
  plot->add_option("--metric", metric_name, "abs_err | rel_err | precision | recall (box)")->capture_default_str();
  plot->add_option("--group-by", group_name, "sample | compound (box)")->capture_default_str();
  plot->add_option("--matrix", matrix_path, "recall_matrix.csv from evaluate (matrix)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  if (extract->parsed()) {
    ex.page_delimiter = parse_delimiter(delimiter);
    ex.cache_dir = cache_dir;
    auto cache = std::make_shared<ReplayCache>(cache_dir);
    std::shared_ptr<Transport> transport;
    if (!offline) {
      EndpointConfig endpoint = EndpointConfig::from_env();
      if (!endpoint.api_key.empty()) transport = std::make_shared<HttpTransport>(endpoint);
    }
    LlmGateway::Options gopt;
    gopt.retry.max_attempts = max_attempts;
    gopt.offline = offline;
    LlmGateway gateway(transport, cache, gopt);
    TokenBudget budget(tokens_per_minute);
    const ExtractResult result = run_extract(ex, gateway, budget, cache.get());
    for (const auto& e : result.file_errors) std::cerr << "error: " << e.file.string() << ": " << e.message << '\n';
    for (const auto& d : result.documents) {
      if (d.error) std::cerr << "error: document " << d.doc_id << ": " << *d.error << '\n';
    }
    std::cout << "extracted " << result.records.size() << " records from " << result.succeeded() << "/"
              << result.documents.size() << " documents into " << ex.out_dir.string() << '\n';
    return result.exit_code();
  }

  if (evaluate->parsed()) {
    ev.unit = parse_units(eval_units);
    const EvaluateResult r = run_evaluate(ev);
    size_t matched = 0, missed = 0, fp = 0;
    for (const auto& m : r.matches) {
      matched += m.kind == MatchKind::Matched;
      missed += m.kind == MatchKind::MissedTruth;
      fp += m.kind == MatchKind::FalsePositive;
    }
    std::cout << "matched " << matched << ", missed " << missed << ", false positives " << fp << "; wrote "
              << ev.out_dir.string() << '\n';
    return kExitOk;
  }

  if (analyze->parsed()) {
    an.unit = parse_units(analyze_units);
    const AnalyticsReport r = run_analyze(an);
    std::cout << r.frequencies.counts.size() << " compounds kept, " << r.frequencies.discarded.size()
              << " discarded; wrote " << an.out_dir.string() << '\n';
    return kExitOk;
  }

  // plot
  std::string svg_text;
  if (kind == "intervals") {
    if (truth_path.empty() || records_path.empty()) throw UsageError("intervals plot needs --truth and --records");
    const auto unit = parse_units(plot_units);
    if (!unit) throw UsageError("intervals plot needs a single unit");
    const auto truth = load_ground_truth(truth_path.string());
    std::vector<svg::IntervalSeries> series{{"with doc.", "#2ca02c", load_records_csv(records_path.string())}};
    if (!standalone_path.empty()) series.push_back({"standalone", "#d62728", load_records_csv(standalone_path.string())});
    if (compounds.empty()) {
      std::set<std::string> c;
      for (const auto& t : truth) {
        if (t.unit == *unit) c.insert(t.compound);
      }
      compounds.assign(c.begin(), c.end());
    }
    svg_text = svg::interval_plot(truth, series, compounds, *unit);
  } else if (kind == "box") {
    if (metrics_path.empty()) throw UsageError("box plot needs --metrics");
    const auto metric = metric_from_name(metric_name);
    const auto by = group_by_from_name(group_name);
    if (!metric || !by) throw UsageError("unknown --metric or --group-by");
    const auto rows = parse_metrics_csv(read_file_text(metrics_path));
    svg_text = svg::box_plot(summarize(rows, *metric, *by), rows, *metric, *by);
  } else if (kind == "matrix") {
    RecallMatrix m;
    if (!matrix_path.empty()) {
      m = parse_recall_matrix_csv(read_file_text(matrix_path));
    } else if (!truth_path.empty() && !records_path.empty()) {
      m = recall_matrix(join_records(load_records_csv(records_path.string()), load_ground_truth(truth_path.string())));
    } else {
      throw UsageError("matrix plot needs --matrix, or --truth and --records");
    }
    svg_text = svg::matrix_plot(m);
  } else {
    throw UsageError("unknown plot kind '" + kind + "' (expected intervals, box, or matrix)");
  }
  write_file(out_file, svg_text);
  std::cout << "wrote " << out_file.string() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const FormatError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInputFormat;
  } catch (const IngestError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInputFormat;
  } catch (const TransportError& e) {
    std::cerr << "endpoint error: " << e.what() << '\n';
    return kExitEndpoint;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
