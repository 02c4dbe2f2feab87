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

#include "ideagrpo/jsonext.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <cstdio>

#include "ideagrpo/error.hpp"

namespace ideagrpo {

std::vector<std::string> FencedBlocks(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t open = text.find("```", pos);
    if (open == std::string_view::npos) break;
    const std::size_t line_end = text.find('\n', open + 3);
    if (line_end == std::string_view::npos) break;
    const std::size_t close = text.find("```", line_end + 1);
    if (close == std::string_view::npos) break;
    out.emplace_back(text.substr(line_end + 1, close - line_end - 1));
    pos = close + 3;
  }
  return out;
}

std::vector<Json> BareJsonObjects(std::string_view text) {
  std::vector<Json> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '{') {
      ++i;
      continue;
    }
    int depth = 0;
    bool in_string = false, escaped = false;
    std::size_t j = i;
    for (; j < text.size(); ++j) {
      const char c = text[j];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}' && --depth == 0) {
        break;
      }
    }
    if (j >= text.size()) break;
    Json parsed = Json::parse(text.substr(i, j - i + 1), nullptr, false);
    if (!parsed.is_discarded() && parsed.is_object()) {
      out.push_back(std::move(parsed));
      i = j + 1;
    } else {
      ++i;
    }
  }
  return out;
}

Json ExtractJsonObject(std::string_view text, JsonPick pick) {
  Json whole = Json::parse(Trim(text), nullptr, false);
  if (!whole.is_discarded() && whole.is_object()) return whole;

  std::vector<Json> found;
  for (const std::string& block : FencedBlocks(text)) {
    Json j = Json::parse(Trim(block), nullptr, false);
    if (!j.is_discarded() && j.is_object()) found.push_back(std::move(j));
  }
  if (found.empty()) found = BareJsonObjects(text);
  if (found.empty()) throw Error(ErrorCode::kNoJsonBlock, "no JSON object in model output");
  return pick == JsonPick::kFirst ? found.front() : found.back();
}

std::optional<std::string> TagBody(std::string_view text, std::string_view tag) {
  const std::string open = "<" + std::string(tag) + ">";
  const std::string close = "</" + std::string(tag) + ">";
  const std::size_t a = text.find(open);
  if (a == std::string_view::npos) return std::nullopt;
  const std::size_t b = text.find(close, a + open.size());
  if (b == std::string_view::npos) return std::nullopt;
  return Trim(text.substr(a + open.size(), b - a - open.size()));
}

std::size_t CountTag(std::string_view text, std::string_view open_tag) {
  std::size_t n = 0;
  for (std::size_t p = text.find(open_tag); p != std::string_view::npos;
       p = text.find(open_tag, p + open_tag.size())) {
    ++n;
  }
  return n;
}

std::string Trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::size_t WordCount(std::string_view s) {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : s) {
    const bool space = std::isspace(static_cast<unsigned char>(c));
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

std::string ToLower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kIo, "sha256 failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof(buf), "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

const Json& RequireKey(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorCode::kMissingKey, std::string("missing key '") + key + "'");
  return *it;
}

std::string RequireStringKey(const Json& obj, const char* key) {
  const Json& v = RequireKey(obj, key);
  if (!v.is_string()) {
    throw Error(ErrorCode::kTypeError, std::string("key '") + key + "' is not a string");
  }
  return v.get<std::string>();
}

}  // namespace ideagrpo
