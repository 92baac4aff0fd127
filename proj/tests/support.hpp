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

// Shared fixtures for the unit and acceptance suites.

#include <atomic>
#include <deque>
#include <filesystem>
#include <mutex>
#include <unistd.h>
#include <random>
#include <string>
#include <vector>

#include "lunex/llm_gateway.hpp"

namespace lunex::testing {

/// Unique scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("lunex-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Scripted transport: replays queued replies and counts calls.
class ScriptedTransport : public Transport {
 public:
  void push(int status, std::string body) {
    std::lock_guard lock(mu_);
    replies_.push_back({status, std::move(body), status == 0 ? "connection refused" : ""});
  }

  HttpReply post_json(const std::string& body) override {
    std::lock_guard lock(mu_);
    ++calls;
    bodies.push_back(body);
    if (replies_.empty()) return {500, "script exhausted", ""};
    HttpReply r = replies_.front();
    replies_.pop_front();
    return r;
  }

  std::atomic<int> calls{0};
  std::vector<std::string> bodies;

 private:
  std::mutex mu_;
  std::deque<HttpReply> replies_;
};

inline std::string completion_body(const std::string& text, int prompt_tokens = 100, int completion_tokens = 20) {
  std::string escaped;
  for (char c : text) {
    switch (c) {
      case '"': escaped += "\\\""; break;
      case '\\': escaped += "\\\\"; break;
      case '\n': escaped += "\\n"; break;
      default: escaped += c;
    }
  }
  return "{\"choices\":[{\"message\":{\"role\":\"assistant\",\"content\":\"" + escaped +
         "\"}}],\"usage\":{\"prompt_tokens\":" + std::to_string(prompt_tokens) +
         ",\"completion_tokens\":" + std::to_string(completion_tokens) + "}}";
}

/// Writes a small PDF whose pages carry the given text lines. Pages listed
/// in `compressed` get a Flate-encoded content stream.
std::string make_pdf(const std::vector<std::vector<std::string>>& pages, const std::vector<bool>& compressed = {});

}  // namespace lunex::testing
