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

#include "ideagrpo/domain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "ideagrpo/error.hpp"

namespace ideagrpo {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kSizeMismatch: return "SizeMismatch";
    case ErrorCode::kNonBinaryReward: return "NonBinaryReward";
    case ErrorCode::kEmptyGroup: return "EmptyGroup";
    case ErrorCode::kInvalidToken: return "InvalidToken";
    case ErrorCode::kDegenerateGroup: return "DegenerateGroup";
    case ErrorCode::kZeroLength: return "ZeroLength";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kTransport: return "Transport";
    case ErrorCode::kRateLimited: return "RateLimited";
    case ErrorCode::kPlaybookMiss: return "PlaybookMiss";
    case ErrorCode::kAuthMissing: return "AuthMissing";
    case ErrorCode::kCacheMiss: return "CacheMiss";
    case ErrorCode::kMissingSlot: return "MissingSlot";
    case ErrorCode::kNoJsonBlock: return "NoJsonBlock";
    case ErrorCode::kMissingKey: return "MissingKey";
    case ErrorCode::kTypeError: return "TypeError";
    case ErrorCode::kParseFailure: return "ParseFailure";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kMalformed: return "Malformed";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kInsufficientCorpus: return "InsufficientCorpus";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

namespace {

template <typename E, std::size_t N>
E ParseEnum(std::string_view s, const std::array<std::pair<E, std::string_view>, N>& table,
            std::string_view what) {
  for (const auto& [value, name] : table) {
    if (name == s) return value;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown " + std::string(what) + " '" + std::string(s) + "'");
}

template <typename E, std::size_t N>
std::string_view EnumName(E v, const std::array<std::pair<E, std::string_view>, N>& table) {
  for (const auto& [value, name] : table) {
    if (value == v) return name;
  }
  return "?";
}

constexpr std::array<std::pair<Source, std::string_view>, 5> kSources{{
    {Source::kIclr2024, "iclr2024"},
    {Source::kNeurips2025, "neurips2025"},
    {Source::kAiScientist, "aiscientist"},
    {Source::kGolden, "golden"},
    {Source::kSynthetic, "synthetic"},
}};

constexpr std::array<std::pair<Split, std::string_view>, 6> kSplits{{
    {Split::kNone, "none"},
    {Split::kRlTrain, "rl_train"},
    {Split::kRlVal, "rl_val"},
    {Split::kRlTest, "rl_test"},
    {Split::kSftTrain, "sft_train"},
    {Split::kSftVal, "sft_val"},
}};

constexpr std::array<std::pair<Role, std::string_view>, 4> kRoles{{
    {Role::kModerator, "moderator"},
    {Role::kAnalyst, "analyst"},
    {Role::kCritic, "critic"},
    {Role::kEvaluator, "evaluator"},
}};

std::string RequireString(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw Error(ErrorCode::kMalformed, std::string("missing string field '") + key + "'");
  }
  return it->get<std::string>();
}

std::string RequireNonEmpty(const Json& j, const char* key) {
  std::string s = RequireString(j, key);
  if (s.empty()) {
    throw Error(ErrorCode::kMalformed, std::string("field '") + key + "' is empty");
  }
  return s;
}

std::optional<std::string> OptionalString(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

void PutOptional(Json& j, const char* key, const std::optional<std::string>& v) {
  j[key] = v ? Json(*v) : Json(nullptr);
}

}  // namespace

std::string_view ToString(Source s) { return EnumName(s, kSources); }
std::string_view ToString(Split s) { return EnumName(s, kSplits); }
std::string_view ToString(Role r) { return EnumName(r, kRoles); }
Source ParseSource(std::string_view s) { return ParseEnum(s, kSources, "source"); }
Split ParseSplit(std::string_view s) { return ParseEnum(s, kSplits, "split"); }
Role ParseRole(std::string_view s) { return ParseEnum(s, kRoles, "role"); }

std::string_view DisplayName(Role r) {
  switch (r) {
    case Role::kModerator: return "Moderator";
    case Role::kAnalyst: return "Analyst";
    case Role::kCritic: return "Critic";
    case Role::kEvaluator: return "Evaluator";
  }
  return "?";
}

bool Verdict::HasFlag(std::string_view flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

Verdict Verdict::Reject(std::string reason, std::string flag) {
  Verdict v;
  v.matched = false;
  v.reason = std::move(reason);
  v.flags.push_back(std::move(flag));
  return v;
}

void ValidateGroup(const RolloutGroup& group) {
  if (group.rollouts.empty()) {
    throw Error(ErrorCode::kEmptyGroup, "group has no rollouts");
  }
  if (group.rollouts.size() < 2) {
    throw Error(ErrorCode::kEmptyGroup, "group size G must be at least 2");
  }
  if (group.rewards.size() != group.rollouts.size()) {
    throw Error(ErrorCode::kSizeMismatch,
                "rollouts=" + std::to_string(group.rollouts.size()) +
                    " but rewards=" + std::to_string(group.rewards.size()));
  }
  for (std::size_t i = 0; i < group.rollouts.size(); ++i) {
    const Rollout& r = group.rollouts[i];
    if (r.tokens.empty()) {
      throw Error(ErrorCode::kSizeMismatch, "rollout " + std::to_string(i) + " has length 0");
    }
    if (r.behavior_logprobs.size() != r.tokens.size()) {
      throw Error(ErrorCode::kSizeMismatch,
                  "rollout " + std::to_string(i) + " has " + std::to_string(r.tokens.size()) +
                      " tokens but " + std::to_string(r.behavior_logprobs.size()) + " logprobs");
    }
    for (double lp : r.behavior_logprobs) {
      if (!(lp <= 0.0)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "rollout " + std::to_string(i) + " has a positive or NaN logprob");
      }
    }
  }
  for (std::size_t i = 0; i < group.rewards.size(); ++i) {
    if (group.rewards[i] != 0 && group.rewards[i] != 1) {
      throw Error(ErrorCode::kNonBinaryReward,
                  "reward[" + std::to_string(i) + "]=" + std::to_string(group.rewards[i]));
    }
  }
}

int ParseBinaryReward(const Json& value) {
  if (value.is_boolean()) return value.get<bool>() ? 1 : 0;
  if (!value.is_number()) {
    throw Error(ErrorCode::kNonBinaryReward, "reward is not a number: " + value.dump());
  }
  const double d = value.get<double>();
  if (d == 0.0) return 0;
  if (d == 1.0) return 1;
  throw Error(ErrorCode::kNonBinaryReward, "reward value " + value.dump() + " not in {0,1}");
}

void to_json(Json& j, const ResearchQuestion& v) {
  j = Json{{"id", v.id}, {"text", v.text}, {"source", ToString(v.source)}};
}
void from_json(const Json& j, ResearchQuestion& v) {
  v.id = RequireString(j, "id");
  v.text = RequireNonEmpty(j, "text");
  v.source = ParseSource(RequireString(j, "source"));
}

void to_json(Json& j, const GoldenAbstract& v) {
  j = Json{{"paper_id", v.paper_id}, {"text", v.text}};
}
void from_json(const Json& j, GoldenAbstract& v) {
  v.paper_id = RequireString(j, "paper_id");
  v.text = RequireNonEmpty(j, "text");
}

void to_json(Json& j, const TrainingExample& v) {
  j = Json{{"question", v.question}, {"golden", v.golden}, {"split", ToString(v.split)}};
  j["score"] = v.score ? Json(*v.score) : Json(nullptr);
}
void from_json(const Json& j, TrainingExample& v) {
  v.question = j.at("question").get<ResearchQuestion>();
  v.golden = j.at("golden").get<GoldenAbstract>();
  v.split = j.contains("split") ? ParseSplit(j.at("split").get<std::string>()) : Split::kNone;
  v.score.reset();
  if (auto it = j.find("score"); it != j.end() && !it->is_null()) v.score = it->get<double>();
}

void to_json(Json& j, const Rollout& v) {
  j = Json{{"tokens", v.tokens},
           {"text", v.text},
           {"behavior_logprobs", v.behavior_logprobs},
           {"length", v.length()}};
  PutOptional(j, "reasoning", v.reasoning);
  PutOptional(j, "answer", v.answer);
}
void from_json(const Json& j, Rollout& v) {
  v.tokens = j.at("tokens").get<std::vector<int>>();
  v.text = j.value("text", std::string());
  v.behavior_logprobs = j.at("behavior_logprobs").get<std::vector<double>>();
  v.reasoning = OptionalString(j, "reasoning");
  v.answer = OptionalString(j, "answer");
  if (auto it = j.find("length"); it != j.end() && it->get<std::size_t>() != v.tokens.size()) {
    throw Error(ErrorCode::kSizeMismatch, "rollout length field disagrees with token count");
  }
}

void to_json(Json& j, const RolloutGroup& v) {
  j = Json{{"question", v.question},
           {"golden", v.golden},
           {"rollouts", v.rollouts},
           {"rewards", v.rewards}};
}
void from_json(const Json& j, RolloutGroup& v) {
  v.question = j.at("question").get<ResearchQuestion>();
  v.golden = j.at("golden").get<GoldenAbstract>();
  v.rollouts = j.at("rollouts").get<std::vector<Rollout>>();
  v.rewards.clear();
  for (const Json& r : j.value("rewards", Json::array())) v.rewards.push_back(ParseBinaryReward(r));
}

void to_json(Json& j, const Verdict& v) {
  j = Json{{"matched", v.matched}, {"reward", v.reward()}, {"reason", v.reason},
           {"flags", v.flags}};
  PutOptional(j, "summarization", v.summarization);
  PutOptional(j, "reasoning", v.reasoning);
}
void from_json(const Json& j, Verdict& v) {
  v.matched = j.at("matched").get<bool>();
  if (auto it = j.find("reward"); it != j.end() && ParseBinaryReward(*it) != v.reward()) {
    throw Error(ErrorCode::kInvalidArgument, "verdict reward disagrees with matched");
  }
  v.reason = j.value("reason", std::string());
  v.summarization = OptionalString(j, "summarization");
  v.reasoning = OptionalString(j, "reasoning");
  v.flags = j.value("flags", std::vector<std::string>{});
}

void to_json(Json& j, const DebateTurn& v) {
  j = Json{{"round", v.round},
           {"role", ToString(v.role)},
           {"agent_index", v.agent_index},
           {"content", v.content}};
}
void from_json(const Json& j, DebateTurn& v) {
  v.round = j.at("round").get<int>();
  v.role = ParseRole(j.at("role").get<std::string>());
  v.agent_index = j.at("agent_index").get<int>();
  v.content = j.at("content").get<std::string>();
}

void to_json(Json& j, const DebateTranscript& v) {
  j = Json{{"turns", v.turns}, {"halted_early", v.halted_early}};
}
void from_json(const Json& j, DebateTranscript& v) {
  v.turns = j.at("turns").get<std::vector<DebateTurn>>();
  v.halted_early = j.at("halted_early").get<bool>();
}

Json ToCorpusLine(const TrainingExample& ex) {
  Json j{{"id", ex.question.id},
         {"question", ex.question.text},
         {"abstract", ex.golden.text},
         {"source", ToString(ex.question.source)}};
  if (ex.golden.paper_id != ex.question.id) j["paper_id"] = ex.golden.paper_id;
  if (ex.score) j["score"] = *ex.score;
  if (ex.split != Split::kNone) j["split"] = ToString(ex.split);
  return j;
}

TrainingExample FromCorpusLine(const Json& line) {
  if (!line.is_object()) throw Error(ErrorCode::kMalformed, "line is not a JSON object");
  TrainingExample ex;
  ex.question.id = RequireNonEmpty(line, "id");
  ex.question.text = RequireNonEmpty(line, "question");
  ex.question.source = ParseSource(line.value("source", std::string("synthetic")));
  ex.golden.paper_id = line.value("paper_id", ex.question.id);
  ex.golden.text = RequireNonEmpty(line, "abstract");
  if (auto it = line.find("score"); it != line.end() && !it->is_null()) {
    if (!it->is_number()) throw Error(ErrorCode::kMalformed, "score is not a number");
    ex.score = it->get<double>();
  }
  if (auto it = line.find("split"); it != line.end()) ex.split = ParseSplit(it->get<std::string>());
  return ex;
}

}  // namespace ideagrpo
