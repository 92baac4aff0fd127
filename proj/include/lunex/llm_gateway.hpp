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

#include <array>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "lunex/corpus_ingest.hpp"

namespace lunex {

inline constexpr const char* kDefaultModel = "gpt-4o";

/// One chat-completion request. The fingerprint is derived from the other
/// three fields on construction and identifies the request in the replay
/// cache.
class PromptRequest {
 public:
  PromptRequest(std::string model_id, double temperature, std::string prompt_text);

  const std::string& model_id() const noexcept { return model_id_; }
  double temperature() const noexcept { return temperature_; }
  const std::string& prompt_text() const noexcept { return prompt_text_; }
  /// Lower-case hex SHA-256.
  const std::string& fingerprint() const noexcept { return fingerprint_; }

 private:
  std::string model_id_;
  double temperature_;
  std::string prompt_text_;
  std::string fingerprint_;
};

std::string request_fingerprint(std::string_view model_id, double temperature,
                                std::string_view prompt_text);

struct CompletionResponse {
  std::string text;
  uint64_t prompt_tokens = 0;
  uint64_t completion_tokens = 0;
  bool from_cache = false;
  int attempts = 0;  // network attempts made for this response
};

/// Extraction prompt: instruction template followed by the chunk text.
/// Throws std::invalid_argument on an empty chunk.
PromptRequest build_extraction_prompt(const DocumentChunk& chunk,
                                      const std::string& model_id = kDefaultModel,
                                      double temperature = 0.0);

/// Baseline prompt asking for a sample's composition with no document text.
PromptRequest build_standalone_prompt(const std::string& sample_id,
                                      const std::string& model_id = kDefaultModel,
                                      double temperature = 0.0);

/// Raw instruction template shared by both prompt builders.
std::string_view extraction_template();

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TransportError : public std::runtime_error {
 public:
  TransportError(const std::string& what, int status, int attempts)
      : std::runtime_error(what), status_(status), attempts_(attempts) {}
  int status() const noexcept { return status_; }
  int attempts() const noexcept { return attempts_; }

 private:
  int status_;
  int attempts_;
};

// ---------------------------------------------------------------------------
// Replay cache

struct CacheStats {
  uint64_t hits = 0;
  uint64_t misses = 0;
  uint64_t stores = 0;
  uint64_t corrupt = 0;
};

/// On-disk response store: one JSON file per fingerprint holding the
/// request metadata and the raw response. Concurrent lookups are allowed;
/// writes to the same fingerprint are serialized and land atomically.
class ReplayCache {
 public:
  explicit ReplayCache(std::filesystem::path dir);

  void store(const PromptRequest& req, const CompletionResponse& resp);
  /// A missing entry, or one that fails to parse or verify, is a miss.
  std::optional<CompletionResponse> lookup(const PromptRequest& req);
  std::optional<CompletionResponse> lookup(const std::string& fingerprint);

  std::filesystem::path entry_path(const std::string& fingerprint) const;
  const std::filesystem::path& dir() const noexcept { return dir_; }

  CacheStats stats() const;
  std::vector<std::string> warnings() const;

 private:
  std::optional<CompletionResponse> lookup_impl(const std::string& fingerprint);
  std::mutex& stripe(const std::string& fingerprint);
  void warn(std::string msg);

  std::filesystem::path dir_;
  mutable std::mutex meta_mu_;
  CacheStats stats_;
  std::vector<std::string> warnings_;
  std::array<std::mutex, 16> stripes_;
};

// ---------------------------------------------------------------------------
// Rate budget

/// Sliding-window tokens-per-minute limiter shared by all callers.
/// Reservations are taken before a request is sent and settled to the
/// reported usage afterwards, so the window total never exceeds the limit
/// as long as reservations are upper bounds.
class TokenBudget {
 public:
  using Clock = std::chrono::steady_clock;
  using NowFn = std::function<Clock::time_point()>;

  /// tokens_per_window == 0 disables the limit.
  explicit TokenBudget(uint64_t tokens_per_window,
                       Clock::duration window = std::chrono::minutes(1),
                       NowFn now = [] { return Clock::now(); });

  struct Reservation {
    uint64_t id = 0;
    uint64_t tokens = 0;
    Clock::time_point granted_at;
  };

  /// Non-blocking: a reservation, or the time to wait before retrying.
  std::variant<Reservation, Clock::duration> try_acquire(uint64_t tokens);
  /// Blocks until `tokens` fit. Throws ConfigError if they never can.
  Reservation acquire(uint64_t tokens);
  /// Replaces a reservation with the actual usage. Usage above the
  /// reservation is charged in full.
  void settle(const Reservation& r, uint64_t actual_tokens);

  uint64_t limit() const noexcept { return limit_; }
  uint64_t in_window();

 private:
  struct Entry {
    uint64_t id;
    Clock::time_point at;
    uint64_t tokens;
  };
  void expire(Clock::time_point now);
  uint64_t used() const;

  uint64_t limit_;
  Clock::duration window_;
  NowFn now_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Entry> entries_;
  uint64_t next_id_ = 1;
};

// ---------------------------------------------------------------------------
// Transport

struct HttpReply {
  int status = 0;  // 0 = connection failure
  std::string body;
  std::string error;
};

class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpReply post_json(const std::string& body) = 0;
};

struct EndpointConfig {
  std::string base_url;  // e.g. https://api.openai.com/v1
  std::string api_key;
  std::chrono::seconds timeout{300};

  /// Reads LUNEX_API_BASE_URL (default https://api.openai.com/v1) and
  /// LUNEX_API_KEY, falling back to OPENAI_API_KEY.
  static EndpointConfig from_env();
};

/// POSTs to <base_url>/chat/completions with a bearer token.
class HttpTransport : public Transport {
 public:
  explicit HttpTransport(EndpointConfig config);
  HttpReply post_json(const std::string& body) override;

 private:
  EndpointConfig config_;
};

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds base_delay{1000};
  double factor = 2.0;
};

struct GatewayStats {
  uint64_t network_calls = 0;
  uint64_t cache_hits = 0;
  uint64_t retries = 0;
  uint64_t prompt_tokens = 0;
  uint64_t completion_tokens = 0;
};

/// Deterministic chat-completion client: replay cache first, then the
/// endpoint under the rate budget with exponential backoff on transient
/// failures (HTTP 429, 5xx, connection errors).
class LlmGateway {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  struct Options {
    RetryPolicy retry;
    uint64_t max_completion_tokens = 4096;
    bool offline = false;  // cache misses become errors instead of requests
  };

  /// `transport` may be null when only cached responses are expected; a
  /// cache miss then raises ConfigError.
  LlmGateway(std::shared_ptr<Transport> transport, std::shared_ptr<ReplayCache> cache,
             Options options);
  LlmGateway(std::shared_ptr<Transport> transport, std::shared_ptr<ReplayCache> cache)
      : LlmGateway(std::move(transport), std::move(cache), Options{}) {}

  CompletionResponse complete(const PromptRequest& req, TokenBudget& budget);

  void set_sleeper(Sleeper s) { sleep_ = std::move(s); }
  GatewayStats stats() const;

  /// Request body for the chat-completion endpoint.
  std::string request_body(const PromptRequest& req) const;
  /// Parses a chat-completion response body; throws TransportError on an
  /// unexpected shape.
  static CompletionResponse parse_reply(const std::string& body);
  /// Conservative token reservation for a request.
  uint64_t reservation_for(const PromptRequest& req) const;

 private:
  std::shared_ptr<Transport> transport_;
  std::shared_ptr<ReplayCache> cache_;
  Options options_;
  Sleeper sleep_;
  mutable std::mutex mu_;
  GatewayStats stats_;
};

}  // namespace lunex
