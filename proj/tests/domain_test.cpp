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

#include <gtest/gtest.h>

#include "ideagrpo/domain.hpp"
#include "ideagrpo/error.hpp"

namespace ideagrpo {
namespace {

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvalidArgument;
}

RolloutGroup TwoRollouts() {
  RolloutGroup g;
  g.question = {"q1", "How?", Source::kGolden};
  g.golden = {"p1", "Abstract."};
  g.rollouts = {Rollout{{1, 2}, "a b", std::nullopt, std::nullopt, {-0.5, -1.0}},
                Rollout{{3}, "c", "why", "what", {-0.1}}};
  g.rewards = {1, 0};
  return g;
}

TEST(EnumTest, RoundTrips) {
  for (Source s : {Source::kIclr2024, Source::kNeurips2025, Source::kAiScientist, Source::kGolden,
                   Source::kSynthetic}) {
    EXPECT_EQ(ParseSource(ToString(s)), s);
  }
  for (Split s : {Split::kNone, Split::kRlTrain, Split::kRlVal, Split::kRlTest, Split::kSftTrain,
                  Split::kSftVal}) {
    EXPECT_EQ(ParseSplit(ToString(s)), s);
  }
  for (Role r : {Role::kModerator, Role::kAnalyst, Role::kCritic, Role::kEvaluator}) {
    EXPECT_EQ(ParseRole(ToString(r)), r);
  }
  EXPECT_EQ(DisplayName(Role::kCritic), "Critic");
  EXPECT_THROW(ParseSource("arxiv"), Error);
}

TEST(ValidateGroupTest, AcceptsWellFormed) { EXPECT_NO_THROW(ValidateGroup(TwoRollouts())); }

TEST(ValidateGroupTest, NamesViolation) {
  RolloutGroup g = TwoRollouts();
  g.rewards = {1};
  EXPECT_EQ(CodeOf([&] { ValidateGroup(g); }), ErrorCode::kSizeMismatch);
  g = TwoRollouts();
  g.rewards = {1, 2};
  EXPECT_EQ(CodeOf([&] { ValidateGroup(g); }), ErrorCode::kNonBinaryReward);
  g = TwoRollouts();
  g.rollouts.pop_back();
  g.rewards.pop_back();
  EXPECT_EQ(CodeOf([&] { ValidateGroup(g); }), ErrorCode::kEmptyGroup);
  g = TwoRollouts();
  g.rollouts[0].behavior_logprobs.pop_back();
  EXPECT_EQ(CodeOf([&] { ValidateGroup(g); }), ErrorCode::kSizeMismatch);
  g = TwoRollouts();
  g.rollouts[1].behavior_logprobs = {0.3};
  EXPECT_EQ(CodeOf([&] { ValidateGroup(g); }), ErrorCode::kInvalidArgument);
}

TEST(BinaryRewardTest, Values) {
  EXPECT_EQ(ParseBinaryReward(Json(1)), 1);
  EXPECT_EQ(ParseBinaryReward(Json(0.0)), 0);
  EXPECT_EQ(ParseBinaryReward(Json(1.0)), 1);
  EXPECT_EQ(CodeOf([] { ParseBinaryReward(Json(0.5)); }), ErrorCode::kNonBinaryReward);
  EXPECT_EQ(CodeOf([] { ParseBinaryReward(Json("1")); }), ErrorCode::kNonBinaryReward);
  EXPECT_EQ(CodeOf([] { ParseBinaryReward(Json(-1)); }), ErrorCode::kNonBinaryReward);
}

TEST(VerdictTest, RewardFollowsMatch) {
  const Verdict v = Verdict::Reject("nope", "placeholder");
  EXPECT_EQ(v.reward(), 0);
  EXPECT_TRUE(v.HasFlag("placeholder"));
  EXPECT_FALSE(v.HasFlag("coerced"));
  Verdict m;
  m.matched = true;
  EXPECT_EQ(m.reward(), 1);
}

TEST(JsonTest, RoundTrips) {
  const RolloutGroup g = TwoRollouts();
  EXPECT_EQ(Json(g).get<RolloutGroup>(), g);
  Verdict v = Verdict::Reject("r", "coerced");
  v.summarization = "s";
  EXPECT_EQ(Json(v).get<Verdict>(), v);
  DebateTranscript t;
  t.turns = {DebateTurn{2, Role::kCritic, 1, "text"}};
  t.halted_early = true;
  EXPECT_EQ(Json(t).get<DebateTranscript>(), t);
  TrainingExample ex;
  ex.question = {"id1", "Q?", Source::kNeurips2025};
  ex.golden = {"id1", "A."};
  ex.split = Split::kRlVal;
  ex.score = 6.5;
  EXPECT_EQ(Json(ex).get<TrainingExample>(), ex);
  EXPECT_EQ(FromCorpusLine(ToCorpusLine(ex)), ex);
}

TEST(CorpusLineTest, RequiredFields) {
  EXPECT_EQ(CodeOf([] { FromCorpusLine(Json{{"id", "x"}, {"question", "q"}}); }),
            ErrorCode::kMalformed);
  EXPECT_EQ(CodeOf([] { FromCorpusLine(Json{{"id", ""}, {"question", "q"}, {"abstract", "a"}}); }),
            ErrorCode::kMalformed);
  EXPECT_EQ(CodeOf([] {
              FromCorpusLine(Json{{"id", "x"}, {"question", "q"}, {"abstract", "a"}, {"score", "7"}});
            }),
            ErrorCode::kMalformed);
  const TrainingExample ex = FromCorpusLine(Json{{"id", "x"}, {"question", "q"}, {"abstract", "a"}});
  EXPECT_EQ(ex.question.source, Source::kSynthetic);
  EXPECT_FALSE(ex.score.has_value());
}

TEST(ErrorTest, CodeNames) {
  EXPECT_EQ(ErrorCodeName(ErrorCode::kDegenerateGroup), "DegenerateGroup");
  const Error e(ErrorCode::kIo, "disk");
  EXPECT_EQ(e.code(), ErrorCode::kIo);
}

}  // namespace
}  // namespace ideagrpo
