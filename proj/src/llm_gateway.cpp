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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <openssl/evp.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "lunex/format.hpp"
#include "lunex/llm_gateway.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace lunex {

namespace {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

bool transient(int status) { return status == 0 || status == 429 || status >= 500; }

}  // namespace

// Fields are length-prefixed so no choice of content can collide with a
// different split; the temperature uses the shortest round-trip form.
std::string request_fingerprint(std::string_view model_id, double temperature,
                                std::string_view prompt_text) {
  std::string canon = "lunex-request-v1\n";
  auto field = [&](std::string_view v) {
    canon += std::to_string(v.size());
    canon += ':';
    canon += v;
    canon += '\n';
  };
  field(model_id);
  field(format_number(temperature));
  field(prompt_text);
  return sha256_hex(canon);
}

PromptRequest::PromptRequest(std::string model_id, double temperature, std::string prompt_text)
    : model_id_(std::move(model_id)), temperature_(temperature), prompt_text_(std::move(prompt_text)) {
  if (!(temperature_ >= 0.0)) throw std::invalid_argument("temperature must be >= 0");
  if (model_id_.empty()) throw std::invalid_argument("model id is empty");
  fingerprint_ = request_fingerprint(model_id_, temperature_, prompt_text_);
}

// ---------------------------------------------------------------------------

ReplayCache::ReplayCache(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw ConfigError("cannot create cache directory " + dir_.string() + ": " + ec.message());
}

fs::path ReplayCache::entry_path(const std::string& fingerprint) const {
  return dir_ / (fingerprint + ".json");
}

std::mutex& ReplayCache::stripe(const std::string& fingerprint) {
  return stripes_[std::hash<std::string>{}(fingerprint) % stripes_.size()];
}

void ReplayCache::warn(std::string msg) {
  std::cerr << "warning: " << msg << '\n';
  std::lock_guard lock(meta_mu_);
  warnings_.push_back(std::move(msg));
}

void ReplayCache::store(const PromptRequest& req, const CompletionResponse& resp) {
  json entry = {
      {"fingerprint", req.fingerprint()},
      {"model_id", req.model_id()},
      {"temperature", req.temperature()},
      {"prompt_text", req.prompt_text()},
      {"response",
       {{"text", resp.text},
        {"prompt_tokens", resp.prompt_tokens},
        {"completion_tokens", resp.completion_tokens}}},
  };
  const fs::path target = entry_path(req.fingerprint());
  std::lock_guard lock(stripe(req.fingerprint()));
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write cache entry " + tmp.string());
    out << entry.dump(2) << '\n';
    if (!out) throw ConfigError("short write on cache entry " + tmp.string());
  }
  fs::rename(tmp, target);
  std::lock_guard meta(meta_mu_);
  ++stats_.stores;
}

std::optional<CompletionResponse> ReplayCache::lookup(const PromptRequest& req) {
  return lookup_impl(req.fingerprint());
}

std::optional<CompletionResponse> ReplayCache::lookup(const std::string& fingerprint) {
  return lookup_impl(fingerprint);
}

std::optional<CompletionResponse> ReplayCache::lookup_impl(const std::string& fingerprint) {
  const fs::path path = entry_path(fingerprint);
  std::string raw;
  {
    std::lock_guard lock(stripe(fingerprint));
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      std::lock_guard meta(meta_mu_);
      ++stats_.misses;
      return std::nullopt;
    }
    raw.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  auto corrupt = [&](const std::string& why) -> std::optional<CompletionResponse> {
    warn("ignoring corrupt cache entry " + path.string() + ": " + why);
    std::lock_guard meta(meta_mu_);
    ++stats_.corrupt;
    ++stats_.misses;
    return std::nullopt;
  };
  try {
    json entry = json::parse(raw);
    if (entry.at("fingerprint").get<std::string>() != fingerprint) {
      return corrupt("fingerprint field does not match file name");
    }
    const std::string recomputed =
        request_fingerprint(entry.at("model_id").get<std::string>(),
                            entry.at("temperature").get<double>(),
                            entry.at("prompt_text").get<std::string>());
    if (recomputed != fingerprint) return corrupt("stored request does not hash to its fingerprint");
    const json& r = entry.at("response");
    CompletionResponse resp;
    resp.text = r.at("text").get<std::string>();
    resp.prompt_tokens = r.at("prompt_tokens").get<uint64_t>();
    resp.completion_tokens = r.at("completion_tokens").get<uint64_t>();
    resp.from_cache = true;
    std::lock_guard meta(meta_mu_);
    ++stats_.hits;
    return resp;
  } catch (const json::exception& e) {
    return corrupt(e.what());
  }
}

CacheStats ReplayCache::stats() const {
  std::lock_guard lock(meta_mu_);
  return stats_;
}

std::vector<std::string> ReplayCache::warnings() const {
  std::lock_guard lock(meta_mu_);
  return warnings_;
}

// ---------------------------------------------------------------------------

TokenBudget::TokenBudget(uint64_t tokens_per_window, Clock::duration window, NowFn now)
    : limit_(tokens_per_window), window_(window), now_(std::move(now)) {}

void TokenBudget::expire(Clock::time_point now) {
  while (!entries_.empty() && entries_.front().at + window_ <= now) entries_.pop_front();
}

uint64_t TokenBudget::used() const {
  uint64_t n = 0;
  for (const auto& e : entries_) n += e.tokens;
  return n;
}

uint64_t TokenBudget::in_window() {
  std::lock_guard lock(mu_);
  expire(now_());
  return used();
}

std::variant<TokenBudget::Reservation, TokenBudget::Clock::duration> TokenBudget::try_acquire(
    uint64_t tokens) {
  std::lock_guard lock(mu_);
  const auto now = now_();
  if (limit_ != 0 && tokens > limit_) {
    throw ConfigError("request needs " + std::to_string(tokens) + " tokens but the budget is " +
                      std::to_string(limit_) + " per window");
  }
  expire(now);
  if (limit_ == 0 || used() + tokens <= limit_) {
    Reservation r{next_id_++, tokens, now};
    entries_.push_back({r.id, now, tokens});
    return r;
  }
  // Wait until enough of the oldest entries age out.
  uint64_t freed = 0;
  const uint64_t need = used() + tokens - limit_;
  for (const auto& e : entries_) {
    freed += e.tokens;
    if (freed >= need) return (e.at + window_) - now;
  }
  return window_;
}

TokenBudget::Reservation TokenBudget::acquire(uint64_t tokens) {
  while (true) {
    auto r = try_acquire(tokens);
    if (auto* res = std::get_if<Reservation>(&r)) return *res;
    auto wait = std::get<Clock::duration>(r);
    std::unique_lock lock(mu_);
    cv_.wait_for(lock, wait);
  }
}

void TokenBudget::settle(const Reservation& r, uint64_t actual_tokens) {
  {
    std::lock_guard lock(mu_);
    for (auto& e : entries_) {
      if (e.id == r.id) {
        e.tokens = actual_tokens;
        break;
      }
    }
  }
  cv_.notify_all();
}

// ---------------------------------------------------------------------------

EndpointConfig EndpointConfig::from_env() {
  EndpointConfig c;
  const char* base = std::getenv("LUNEX_API_BASE_URL");
  c.base_url = (base && *base) ? base : "https://api.openai.com/v1";
  const char* key = std::getenv("LUNEX_API_KEY");
  if (!key || !*key) key = std::getenv("OPENAI_API_KEY");
  if (key) c.api_key = key;
  return c;
}

HttpTransport::HttpTransport(EndpointConfig config) : config_(std::move(config)) {
  if (config_.api_key.empty()) {
    throw ConfigError("no API credential configured (set LUNEX_API_KEY)");
  }
  if (config_.base_url.rfind("http://", 0) != 0 && config_.base_url.rfind("https://", 0) != 0) {
    throw ConfigError("endpoint base URL must start with http:// or https://: " + config_.base_url);
  }
}

HttpReply HttpTransport::post_json(const std::string& body) {
  // Split "https://host[:port]/prefix" into the client origin and the path.
  const std::string& url = config_.base_url;
  size_t scheme_end = url.find("://") + 3;
  size_t path_start = url.find('/', scheme_end);
  std::string origin = url.substr(0, path_start);
  std::string prefix = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();

  httplib::Client client(origin);
  client.set_connection_timeout(30);
  client.set_read_timeout(config_.timeout.count());
  client.set_bearer_token_auth(config_.api_key);
  auto res = client.Post(prefix + "/chat/completions", body, "application/json");
  HttpReply reply;
  if (!res) {
    reply.error = httplib::to_string(res.error());
    return reply;
  }
  reply.status = res->status;
  reply.body = res->body;
  return reply;
}

// ---------------------------------------------------------------------------

LlmGateway::LlmGateway(std::shared_ptr<Transport> transport, std::shared_ptr<ReplayCache> cache,
                       Options options)
    : transport_(std::move(transport)),
      cache_(std::move(cache)),
      options_(options),
      sleep_([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }) {
  if (options_.retry.max_attempts < 1) throw ConfigError("max attempts must be at least 1");
}

std::string LlmGateway::request_body(const PromptRequest& req) const {
  json body = {
      {"model", req.model_id()},
      {"temperature", req.temperature()},
      {"max_tokens", options_.max_completion_tokens},
      {"messages", json::array({{{"role", "user"}, {"content", req.prompt_text()}}})},
  };
  return body.dump();
}

CompletionResponse LlmGateway::parse_reply(const std::string& body) {
  try {
    json j = json::parse(body);
    CompletionResponse out;
    const json& content = j.at("choices").at(0).at("message").at("content");
    out.text = content.is_null() ? std::string() : content.get<std::string>();
    if (j.contains("usage")) {
      out.prompt_tokens = j["usage"].value("prompt_tokens", uint64_t{0});
      out.completion_tokens = j["usage"].value("completion_tokens", uint64_t{0});
    }
    return out;
  } catch (const json::exception& e) {
    throw TransportError(std::string("unexpected completion payload: ") + e.what(), 200, 1);
  }
}

// Byte count bounds the prompt token count from above.
uint64_t LlmGateway::reservation_for(const PromptRequest& req) const {
  return req.prompt_text().size() + options_.max_completion_tokens;
}

CompletionResponse LlmGateway::complete(const PromptRequest& req, TokenBudget& budget) {
  if (cache_) {
    if (auto hit = cache_->lookup(req)) {
      std::lock_guard lock(mu_);
      ++stats_.cache_hits;
      return *hit;
    }
  }
  if (options_.offline) {
    throw ConfigError("offline mode: no cached response for request " + req.fingerprint());
  }
  if (!transport_) {
    throw ConfigError("no API credential configured and no cached response for request " +
                      req.fingerprint());
  }

  const std::string body = request_body(req);
  auto delay = options_.retry.base_delay;
  HttpReply last;
  for (int attempt = 1; attempt <= options_.retry.max_attempts; ++attempt) {
    auto reservation = budget.acquire(reservation_for(req));
    {
      std::lock_guard lock(mu_);
      ++stats_.network_calls;
      if (attempt > 1) ++stats_.retries;
    }
    last = transport_->post_json(body);
    if (last.status >= 200 && last.status < 300) {
      CompletionResponse resp = parse_reply(last.body);
      resp.attempts = attempt;
      budget.settle(reservation, resp.prompt_tokens + resp.completion_tokens);
      {
        std::lock_guard lock(mu_);
        stats_.prompt_tokens += resp.prompt_tokens;
        stats_.completion_tokens += resp.completion_tokens;
      }
      if (cache_) cache_->store(req, resp);
      return resp;
    }
    // A rejected request may still have been metered; keep the reservation.
    budget.settle(reservation, last.status == 0 ? 0 : reservation.tokens);
    if (!transient(last.status)) {
      throw TransportError("endpoint returned HTTP " + std::to_string(last.status) + ": " +
                               last.body.substr(0, 500),
                           last.status, attempt);
    }
    if (attempt < options_.retry.max_attempts) {
      sleep_(delay);
      delay = std::chrono::milliseconds(
          static_cast<long long>(static_cast<double>(delay.count()) * options_.retry.factor));
    }
  }
  std::string detail = last.status == 0 ? "connection failure: " + last.error
                                        : "HTTP " + std::to_string(last.status);
  throw TransportError("giving up after " + std::to_string(options_.retry.max_attempts) +
                           " attempts (last: " + detail + ")",
                       last.status, options_.retry.max_attempts);
}

GatewayStats LlmGateway::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

}  // namespace lunex
