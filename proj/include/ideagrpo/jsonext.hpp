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

#ifndef IDEAGRPO_JSONEXT_HPP_
#define IDEAGRPO_JSONEXT_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ideagrpo/domain.hpp"

namespace ideagrpo {

// Bodies of ``` fenced blocks, in order. The info string (e.g. "json") is
// dropped.
std::vector<std::string> FencedBlocks(std::string_view text);

// Every balanced top-level {...} span in `text` that parses as a JSON object.
std::vector<Json> BareJsonObjects(std::string_view text);

enum class JsonPick { kFirst, kLast };

// Lenient object extraction used by every LLM-output parser: the whole text,
// then fenced blocks, then bare objects. Throws kNoJsonBlock when nothing
// parses.
Json ExtractJsonObject(std::string_view text, JsonPick pick = JsonPick::kFirst);

// Body of the first <tag>...</tag>, trimmed.
std::optional<std::string> TagBody(std::string_view text, std::string_view tag);
std::size_t CountTag(std::string_view text, std::string_view open_tag);

std::string Trim(std::string_view s);
std::size_t WordCount(std::string_view s);
std::string ToLower(std::string_view s);

std::string Sha256Hex(std::string_view data);

// Typed required-key accessors raising kMissingKey / kTypeError.
const Json& RequireKey(const Json& obj, const char* key);
std::string RequireStringKey(const Json& obj, const char* key);

}  // namespace ideagrpo

#endif  // IDEAGRPO_JSONEXT_HPP_
