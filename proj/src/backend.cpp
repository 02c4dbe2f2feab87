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

#include "ideagrpo/backend.hpp"

#include "httplib.h"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "ideagrpo/error.hpp"
#include "ideagrpo/jsonext.hpp"

namespace ideagrpo {

namespace fs = std::filesystem;

std::string_view ToString(ChatRole r) {
  switch (r) {
    case ChatRole::kSystem: return "system";
    case ChatRole::kUser: return "user";
    case ChatRole::kAssistant: return "assistant";
  }
  return "user";
}

void to_json(Json& j, const ChatMessage& m) {
  j = Json{{"role", ToString(m.role)}, {"content", m.content}};
}

std::vector<std::string> RouteTag::PlaybookKeys() const {
  const std::string rk = role + "/r" + std::to_string(round) + "/" + std::to_string(agent_index);
  std::vector<std::string> keys;
  if (!scope.empty()) {
    keys.push_back(scope + "/" + rk);
    keys.push_back(scope + "/" + role);
  }
  keys.push_back(rk);
  keys.push_back(role + "/r" + std::to_string(round));
  keys.push_back(role);
  return keys;
}

void CompletionRequest::Validate() const {
  if (messages.empty()) throw Error(ErrorCode::kInvalidArgument, "request has no messages");
  for (const ChatMessage& m : messages) {
    if (m.role != ChatRole::kAssistant && m.content.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "empty system/user message");
    }
  }
  if (!(temperature >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "temperature < 0");
  if (max_tokens < 1) throw Error(ErrorCode::kInvalidArgument, "max_tokens < 1");
}

Json CanonicalRequest(const CompletionRequest& req) {
  Json messages = Json::array();
  for (const ChatMessage& m : req.messages) messages.push_back(m);
  return Json{{"messages", messages},
              {"temperature", req.temperature},
              {"max_tokens", req.max_tokens},
              {"model", req.model},
              {"route",
               {{"scope", req.route.scope},
                {"role", req.route.role},
                {"round", req.route.round},
                {"agent_index", req.route.agent_index},
                {"attempt", req.route.attempt}}}};
}

std::string CacheKey(const CompletionRequest& req) {
  return Sha256Hex(CanonicalRequest(req).dump());
}

// ---------------------------------------------------------------- http

HttpBackend::HttpBackend(HttpConfig cfg)
    : cfg_(std::move(cfg)), in_flight_(std::max(1, std::min(cfg_.max_in_flight, 1024))) {
  if (cfg_.base_url.empty() || cfg_.model.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "http backend needs base_url and model");
  }
  const std::size_t scheme_end = cfg_.base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "base_url must include a scheme: " + cfg_.base_url);
  }
  const std::size_t path_start = cfg_.base_url.find('/', scheme_end + 3);
  scheme_host_port_ = cfg_.base_url.substr(0, path_start);
  path_prefix_ = path_start == std::string::npos ? "" : cfg_.base_url.substr(path_start);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

std::string HttpBackend::Complete(const CompletionRequest& req) {
  req.Validate();
  httplib::Headers headers;
  if (!cfg_.key_env.empty()) {
    const char* key = std::getenv(cfg_.key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw Error(ErrorCode::kAuthMissing, "environment variable " + cfg_.key_env + " is unset");
    }
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  Json messages = Json::array();
  for (const ChatMessage& m : req.messages) messages.push_back(m);
  const Json body{{"model", req.model.empty() ? cfg_.model : req.model},
                  {"messages", messages},
                  {"temperature", req.temperature},
                  {"max_tokens", req.max_tokens}};
  const std::string payload = body.dump();

  in_flight_.acquire();
  struct Release {
    std::counting_semaphore<1024>& s;
    ~Release() { s.release(); }
  } release{in_flight_};
  ++calls_;

  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(cfg_.timeout_s);
  client.set_read_timeout(cfg_.timeout_s);
  client.set_write_timeout(cfg_.timeout_s);

  ErrorCode last_code = ErrorCode::kTransport;
  std::string last_detail;
  for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
    if (attempt > 0) {
      ++retries_;
      const double delay = cfg_.initial_backoff_ms * std::pow(cfg_.backoff_multiplier, attempt - 1);
      std::this_thread::sleep_for(std::chrono::milliseconds(static_cast<long>(delay)));
    }
    auto res = client.Post(path_prefix_ + "/chat/completions", headers, payload,
                           "application/json");
    if (!res) {
      last_code = ErrorCode::kTransport;
      last_detail = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429) {
      last_code = ErrorCode::kRateLimited;
      last_detail = "HTTP 429";
      continue;
    }
    if (res->status >= 500) {
      last_code = ErrorCode::kTransport;
      last_detail = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw Error(ErrorCode::kTransport,
                  "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
    }
    Json parsed = Json::parse(res->body, nullptr, false);
    if (parsed.is_discarded()) throw Error(ErrorCode::kTransport, "response is not JSON");
    try {
      return parsed.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const Json::exception&) {
      throw Error(ErrorCode::kTransport, "response lacks choices[0].message.content");
    }
  }
  throw Error(last_code, last_detail + " after " + std::to_string(cfg_.max_retries) + " retries");
}

// ---------------------------------------------------------------- scripted

ScriptedBackend::ScriptedBackend(Json playbook) : playbook_(std::move(playbook)) {
  if (!playbook_.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "playbook must be a JSON object");
  }
  for (auto it = playbook_.begin(); it != playbook_.end(); ++it) {
    const Json& v = it.value();
    bool ok = v.is_string();
    if (v.is_array()) {
      ok = true;
      for (const Json& e : v) ok = ok && e.is_string();
    }
    if (!ok) {
      throw Error(ErrorCode::kInvalidArgument,
                  "playbook entry '" + it.key() + "' must be a string or array of strings");
    }
  }
}

ScriptedBackend::ScriptedBackend(Responder responder) : responder_(std::move(responder)) {}

std::string ScriptedBackend::Complete(const CompletionRequest& req) {
  req.Validate();
  const auto keys = req.route.PlaybookKeys();
  if (responder_) {
    std::optional<std::string> out = responder_(req);
    std::lock_guard lock(mu_);
    if (!out) throw Error(ErrorCode::kPlaybookMiss, "no scripted response for " + keys.front());
    log_.push_back(keys.front());
    return *out;
  }
  std::lock_guard lock(mu_);
  for (const std::string& key : keys) {
    auto it = playbook_.find(key);
    if (it == playbook_.end()) continue;
    if (it->is_string()) {
      log_.push_back(key);
      return it->get<std::string>();
    }
    std::size_t& cur = cursor_[key];
    if (cur < it->size()) {
      log_.push_back(key);
      return (*it)[cur++].get<std::string>();
    }
    throw Error(ErrorCode::kPlaybookMiss,
                "playbook entry '" + key + "' exhausted after " + std::to_string(cur) + " uses");
  }
  throw Error(ErrorCode::kPlaybookMiss, "no playbook entry for '" + keys.front() + "'");
}

std::vector<std::string> ScriptedBackend::call_log() const {
  std::lock_guard lock(mu_);
  return log_;
}

long ScriptedBackend::calls() const {
  std::lock_guard lock(mu_);
  return static_cast<long>(log_.size());
}

// ---------------------------------------------------------------- replay

ReplayBackend::ReplayBackend(std::string cache_dir, std::shared_ptr<Backend> fallback)
    : cache_dir_(std::move(cache_dir)), fallback_(std::move(fallback)) {
  if (cache_dir_.empty()) throw Error(ErrorCode::kInvalidArgument, "replay needs a cache_dir");
  std::error_code ec;
  fs::create_directories(cache_dir_, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create cache dir " + cache_dir_);
}

std::string ReplayBackend::Complete(const CompletionRequest& req) {
  req.Validate();
  const Json canonical = CanonicalRequest(req);
  const std::string key = Sha256Hex(canonical.dump());
  const fs::path path = fs::path(cache_dir_) / (key + ".json");
  {
    std::ifstream in(path, std::ios::binary);
    if (in) {
      Json entry = Json::parse(in, nullptr, false);
      if (!entry.is_discarded() && entry.contains("response")) {
        ++hits_;
        return entry["response"].get<std::string>();
      }
    }
  }
  ++misses_;
  if (!fallback_) throw Error(ErrorCode::kCacheMiss, "no cached completion " + key);
  std::string response = fallback_->Complete(req);
  const Json entry{{"key", key}, {"request", canonical}, {"response", response}};
  std::lock_guard lock(write_mu_);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out << entry.dump(2) << '\n';
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot commit cache entry " + path.string());
  return response;
}

// ---------------------------------------------------------------- factory

std::shared_ptr<Backend> MakeBackend(const Json& spec) {
  if (!spec.is_object() || !spec.contains("kind")) {
    throw Error(ErrorCode::kInvalidArgument, "backend spec needs a 'kind'");
  }
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "http") {
    HttpConfig c;
    c.base_url = spec.value("base_url", std::string());
    c.model = spec.value("model", std::string());
    c.key_env = spec.value("key_env", c.key_env);
    c.max_retries = spec.value("max_retries", c.max_retries);
    c.initial_backoff_ms = spec.value("initial_backoff_ms", c.initial_backoff_ms);
    c.backoff_multiplier = spec.value("backoff_multiplier", c.backoff_multiplier);
    c.timeout_s = spec.value("timeout_s", c.timeout_s);
    c.max_in_flight = spec.value("max_in_flight", c.max_in_flight);
    return std::make_shared<HttpBackend>(std::move(c));
  }
  if (kind == "scripted") {
    if (spec.contains("playbook")) return std::make_shared<ScriptedBackend>(spec.at("playbook"));
    const std::string path = spec.value("playbook_path", std::string());
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot open playbook " + path);
    Json playbook = Json::parse(in, nullptr, false);
    if (playbook.is_discarded()) throw Error(ErrorCode::kMalformed, "playbook is not JSON: " + path);
    return std::make_shared<ScriptedBackend>(std::move(playbook));
  }
  if (kind == "replay") {
    std::shared_ptr<Backend> fallback;
    if (auto it = spec.find("fallback"); it != spec.end() && !it->is_null()) {
      fallback = MakeBackend(*it);
    }
    return std::make_shared<ReplayBackend>(spec.value("cache_dir", std::string()),
                                           std::move(fallback));
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown backend kind '" + kind + "'");
}

}  // namespace ideagrpo
