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

#ifndef IDEAGRPO_DOMAIN_HPP_
#define IDEAGRPO_DOMAIN_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace ideagrpo {

using Json = nlohmann::json;

enum class Source { kIclr2024, kNeurips2025, kAiScientist, kGolden, kSynthetic };
enum class Split { kNone, kRlTrain, kRlVal, kRlTest, kSftTrain, kSftVal };
enum class Role { kModerator, kAnalyst, kCritic, kEvaluator };

std::string_view ToString(Source s);
std::string_view ToString(Split s);
std::string_view ToString(Role r);
Source ParseSource(std::string_view s);
Split ParseSplit(std::string_view s);
Role ParseRole(std::string_view s);
// "Moderator", "Analyst", ... as used in rendered debate history.
std::string_view DisplayName(Role r);

struct ResearchQuestion {
  std::string id;
  std::string text;
  Source source = Source::kSynthetic;

  bool operator==(const ResearchQuestion&) const = default;
};

struct GoldenAbstract {
  std::string paper_id;
  std::string text;

  bool operator==(const GoldenAbstract&) const = default;
};

struct TrainingExample {
  ResearchQuestion question;
  GoldenAbstract golden;
  Split split = Split::kNone;
  // Optional review score used by the corpus threshold filter.
  std::optional<double> score;

  bool operator==(const TrainingExample&) const = default;
};

struct Rollout {
  std::vector<int> tokens;
  std::string text;
  std::optional<std::string> reasoning;
  std::optional<std::string> answer;
  // Natural-log probability of each emitted token under the behavior policy.
  std::vector<double> behavior_logprobs;

  // Token count |o_i|, including any tag tokens.
  std::size_t length() const { return tokens.size(); }

  bool operator==(const Rollout&) const = default;
};

struct RolloutGroup {
  ResearchQuestion question;
  GoldenAbstract golden;
  std::vector<Rollout> rollouts;
  // Empty until the reward function has run; afterwards one {0,1} per rollout.
  std::vector<int> rewards;

  std::size_t size() const { return rollouts.size(); }

  bool operator==(const RolloutGroup&) const = default;
};

// The judge's binary decision. reward is always derived from matched.
struct Verdict {
  bool matched = false;
  std::string reason;
  std::optional<std::string> summarization;
  std::optional<std::string> reasoning;
  // Machine-readable annotations such as "coerced", "unparseable",
  // "placeholder", "no-aggregator".
  std::vector<std::string> flags;

  int reward() const { return matched ? 1 : 0; }
  bool HasFlag(std::string_view flag) const;

  static Verdict Reject(std::string reason, std::string flag);

  bool operator==(const Verdict&) const = default;
};

struct DebateTurn {
  int round = 1;
  Role role = Role::kAnalyst;
  int agent_index = 0;
  std::string content;

  bool operator==(const DebateTurn&) const = default;
};

struct DebateTranscript {
  std::vector<DebateTurn> turns;
  bool halted_early = false;

  bool operator==(const DebateTranscript&) const = default;
};

// Checks every RolloutGroup invariant, throwing Error with kEmptyGroup,
// kSizeMismatch or kNonBinaryReward naming the violated one.
void ValidateGroup(const RolloutGroup& group);

// Parses a reward value that may arrive as any JSON number. Anything other
// than exactly 0 or 1 is kNonBinaryReward.
int ParseBinaryReward(const Json& value);

void to_json(Json& j, const ResearchQuestion& v);
void from_json(const Json& j, ResearchQuestion& v);
void to_json(Json& j, const GoldenAbstract& v);
void from_json(const Json& j, GoldenAbstract& v);
void to_json(Json& j, const TrainingExample& v);
void from_json(const Json& j, TrainingExample& v);
void to_json(Json& j, const Rollout& v);
void from_json(const Json& j, Rollout& v);
void to_json(Json& j, const RolloutGroup& v);
void from_json(const Json& j, RolloutGroup& v);
void to_json(Json& j, const Verdict& v);
void from_json(const Json& j, Verdict& v);
void to_json(Json& j, const DebateTurn& v);
void from_json(const Json& j, DebateTurn& v);
void to_json(Json& j, const DebateTranscript& v);
void from_json(const Json& j, DebateTranscript& v);

// Flat corpus-line form: {id, question, abstract, source, score?, split?}.
Json ToCorpusLine(const TrainingExample& ex);
TrainingExample FromCorpusLine(const Json& line);

}  // namespace ideagrpo

#endif  // IDEAGRPO_DOMAIN_HPP_
