// Copyright 2026 The ideagrpo Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IDEAGRPO_BACKEND_HPP_
#define IDEAGRPO_BACKEND_HPP_

#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

#include "ideagrpo/domain.hpp"

namespace ideagrpo {

enum class ChatRole { kSystem, kUser, kAssistant };

struct ChatMessage {
  ChatRole role = ChatRole::kUser;
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

// Identifies which agent issued a request. Never sent over the wire; the
// scripted backend routes on it and the replay cache keys on it so that
// retries of an identical prompt stay distinguishable.
struct RouteTag {
  std::string scope;  // e.g. a case id; may be empty
  std::string role;   // "analyst", "pairwise", "classifier", ...
  int round = 1;
  int agent_index = 0;
  int attempt = 0;

  // Most-specific-first playbook keys:
  //   scope/role/r<round>/<agent>, scope/role, role/r<round>/<agent>,
  //   role/r<round>, role.
  std::vector<std::string> PlaybookKeys() const;
};

struct CompletionRequest {
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int max_tokens = 4096;
  std::string model;
  RouteTag route;

  void Validate() const;
};

// Stable JSON form of a request (sorted keys); the cache key hashes it.
Json CanonicalRequest(const CompletionRequest& req);
std::string CacheKey(const CompletionRequest& req);

class Backend {
 public:
  virtual ~Backend() = default;
  // Returns assistant text or throws Error.
  virtual std::string Complete(const CompletionRequest& req) = 0;
  // Upper bound on concurrent Complete calls callers should issue.
  virtual int max_in_flight() const { return 1; }
};

struct HttpConfig {
  std::string base_url;  // e.g. http://localhost:8000/v1
  std::string model;
  // Environment variable holding the bearer token; empty disables auth.
  std::string key_env = "LLM_API_KEY";
  int max_retries = 3;
  int initial_backoff_ms = 500;
  double backoff_multiplier = 2.0;
  int timeout_s = 120;
  int max_in_flight = 4;
};

// OpenAI-compatible POST {base_url}/chat/completions.
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(HttpConfig cfg);

  std::string Complete(const CompletionRequest& req) override;
  int max_in_flight() const override { return cfg_.max_in_flight; }

  long total_retries() const { return retries_.load(); }
  long total_calls() const { return calls_.load(); }

 private:
  HttpConfig cfg_;
  std::string scheme_host_port_;
  std::string path_prefix_;
  std::counting_semaphore<1024> in_flight_;
  std::atomic<long> retries_{0};
  std::atomic<long> calls_{0};
};

// Plays back canned responses. A playbook is a JSON object mapping keys (see
// RouteTag::PlaybookKeys) to a string, or to an array of strings consumed in
// order. A request with no matching, unexhausted entry is kPlaybookMiss.
class ScriptedBackend : public Backend {
 public:
  using Responder = std::function<std::optional<std::string>(const CompletionRequest&)>;

  explicit ScriptedBackend(Json playbook);
  explicit ScriptedBackend(Responder responder);

  std::string Complete(const CompletionRequest& req) override;
  int max_in_flight() const override { return 8; }

  // Keys consumed so far, in call order.
  std::vector<std::string> call_log() const;
  long calls() const;

 private:
  Json playbook_;
  Responder responder_;
  mutable std::mutex mu_;
  std::map<std::string, std::size_t> cursor_;
  std::vector<std::string> log_;
};

// Content-addressed cache of completions in a directory (<sha256>.json).
// Misses go to the fallback and are recorded; without a fallback a miss is
// kCacheMiss.
class ReplayBackend : public Backend {
 public:
  ReplayBackend(std::string cache_dir, std::shared_ptr<Backend> fallback);

  std::string Complete(const CompletionRequest& req) override;
  int max_in_flight() const override { return fallback_ ? fallback_->max_in_flight() : 8; }

  long hits() const { return hits_.load(); }
  long misses() const { return misses_.load(); }

 private:
  std::string cache_dir_;
  std::shared_ptr<Backend> fallback_;
  std::mutex write_mu_;
  std::atomic<long> hits_{0};
  std::atomic<long> misses_{0};
};

// Builds a backend from its JSON description:
//   {"kind": "http", "base_url": ..., "model": ..., "key_env": ..., ...}
//   {"kind": "scripted", "playbook": {...}} or {"kind": "scripted", "playbook_path": ...}
//   {"kind": "replay", "cache_dir": ..., "fallback": {...}|null}
std::shared_ptr<Backend> MakeBackend(const Json& spec);

std::string_view ToString(ChatRole r);
void to_json(Json& j, const ChatMessage& m);

}  // namespace ideagrpo

#endif  // IDEAGRPO_BACKEND_HPP_
