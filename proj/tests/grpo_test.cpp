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

#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "ideagrpo/error.hpp"
#include "ideagrpo/grpo.hpp"
#include "ideagrpo/toytask.hpp"
#include "test_util.hpp"

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

TEST(AdvantageTest, MeanSubtractExamples) {
  const std::vector<int> r = {1, 0, 0, 0};
  const auto a = SequenceAdvantages(r, AdvantageMode::kMeanSubtract);
  EXPECT_EQ(a, (std::vector<double>{0.75, -0.25, -0.25, -0.25}));
  const std::vector<int> r2 = {1, 1, 0, 0, 1, 0, 1, 1};
  const auto a2 = SequenceAdvantages(r2, AdvantageMode::kMeanSubtract);
  EXPECT_EQ(a2[0], 0.375);
  EXPECT_EQ(a2[2], -0.625);
}

TEST(AdvantageTest, StandardizedExample) {
  const std::vector<int> r = {1, 0, 1, 0};
  const auto a = SequenceAdvantages(r, AdvantageMode::kStandardized);
  EXPECT_EQ(a, (std::vector<double>{1.0, -1.0, 1.0, -1.0}));
  const std::vector<int> same = {1, 1, 1};
  EXPECT_EQ(CodeOf([&] { SequenceAdvantages(same, AdvantageMode::kStandardized); }),
            ErrorCode::kDegenerateGroup);
  EXPECT_EQ(SequenceAdvantages(same, AdvantageMode::kMeanSubtract),
            (std::vector<double>{0.0, 0.0, 0.0}));
}

TEST(AdvantageTest, InputErrors) {
  const std::vector<int> one = {1};
  const std::vector<int> bad = {0, 2};
  EXPECT_EQ(CodeOf([&] { SequenceAdvantages(one, AdvantageMode::kMeanSubtract); }),
            ErrorCode::kEmptyGroup);
  EXPECT_EQ(CodeOf([&] { SequenceAdvantages(bad, AdvantageMode::kMeanSubtract); }),
            ErrorCode::kNonBinaryReward);
}

TEST(AdvantageTest, ZeroSumProperty) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t g = 2 + rng() % 31;
    std::vector<int> r(g);
    for (int& v : r) v = static_cast<int>(rng() % 2);
    const auto a = SequenceAdvantages(r, AdvantageMode::kMeanSubtract);
    const double sum = std::accumulate(a.begin(), a.end(), 0.0);
    if ((g & (g - 1)) == 0) {
      EXPECT_EQ(sum, 0.0) << "G=" << g;
    } else {
      EXPECT_LE(std::abs(sum), 1e-12) << "G=" << g;
    }
    if (std::adjacent_find(r.begin(), r.end(), std::not_equal_to<>()) != r.end()) {
      const auto s = SequenceAdvantages(r, AdvantageMode::kStandardized);
      double m = 0.0, v = 0.0;
      for (double x : s) m += x;
      m /= g;
      for (double x : s) v += (x - m) * (x - m);
      EXPECT_NEAR(m, 0.0, 1e-12);
      EXPECT_NEAR(v / g, 1.0, 1e-12);
    }
  }
}

TEST(LengthWeightTest, Examples) {
  const std::vector<std::size_t> l = {2, 4};
  const auto w = LengthWeights(l);
  EXPECT_DOUBLE_EQ(w[0], 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(w[1], 2.0 / 3.0);
  const std::vector<std::size_t> l2 = {1, 2, 4, 8};
  const auto w2 = LengthWeights(l2);
  const double mean_inv = (1.0 + 0.5 + 0.25 + 0.125) / 4.0;
  for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(w2[i], (1.0 / l2[i]) / mean_inv);
  const std::vector<std::size_t> zero = {3, 0};
  EXPECT_EQ(CodeOf([&] { LengthWeights(zero); }), ErrorCode::kZeroLength);
}

TEST(LengthWeightTest, MeanInverseIsOneAndTokenSumsAreLengthInvariant) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t g = 2 + rng() % 10;
    std::vector<std::size_t> len(g);
    for (auto& l : len) l = 1 + rng() % 40;
    const auto w = LengthWeights(len);
    double mean_inv = 0.0, mean_w_over_len = 0.0;
    for (std::size_t i = 0; i < g; ++i) {
      mean_inv += 1.0 / len[i];
      mean_w_over_len += w[i] * len[i];
    }
    std::vector<double> adv(g, 1.0);
    const Ragged tok = TokenAdvantages(adv, w, len);
    // sum_t A_{i,t} = A_i * |o_i| * w_i = A_i / mean_j(1/|o_j|): the same for every i.
    const double expected = 1.0 / (mean_inv / g);
    for (std::size_t i = 0; i < g; ++i) {
      const double s = std::accumulate(tok[i].begin(), tok[i].end(), 0.0);
      EXPECT_NEAR(s, expected, 1e-9 * expected);
    }
  }
}

TEST(TokenAdvantageTest, BroadcastAndDisable) {
  const std::vector<double> adv = {0.5, -0.5};
  const std::vector<double> w = {4.0 / 3.0, 2.0 / 3.0};
  const std::vector<std::size_t> len = {2, 4};
  const Ragged on = TokenAdvantages(adv, w, len);
  EXPECT_EQ(on[0], (std::vector<double>(2, 0.5 * 4.0 / 3.0)));
  EXPECT_EQ(on[1], (std::vector<double>(4, -0.5 * 2.0 / 3.0)));
  const Ragged off = TokenAdvantages(adv, w, len, false);
  EXPECT_EQ(off[1], (std::vector<double>(4, -0.5)));
  const std::vector<std::size_t> short_len = {2};
  EXPECT_EQ(CodeOf([&] { TokenAdvantages(adv, w, short_len); }), ErrorCode::kLengthMismatch);
}

TEST(ClipTest, HandComputedCases) {
  EXPECT_EQ(ClippedObjective({{1.3}}, {{2.0}}, 0.2, 1).objective, 1.2 * 2.0);
  EXPECT_DOUBLE_EQ(ClippedObjective({{1.3}}, {{2.0}}, 0.2, 1).objective, 2.4);
  EXPECT_DOUBLE_EQ(ClippedObjective({{0.5}}, {{-1.0}}, 0.2, 1).objective, -0.8);
  EXPECT_EQ(ClippedObjective({{1.3}}, {{2.0}}, 0.2, 1).clip_fraction, 1.0);
  // Pessimistic side is unclipped: rho A already below the clipped value.
  EXPECT_DOUBLE_EQ(ClippedObjective({{0.5}}, {{2.0}}, 0.2, 1).objective, 1.0);
  EXPECT_DOUBLE_EQ(ClippedObjective({{1.5}}, {{-1.0}}, 0.2, 1).objective, -1.5);
  EXPECT_DOUBLE_EQ(ClippedObjective({{1.0, 1.0}, {1.0}}, {{1.0, 1.0}, {-2.0}}, 0.2, 2).objective,
                   0.0);
}

TEST(ClipTest, RatiosAndErrors) {
  const std::vector<double> a = {-1.0, -2.0};
  const std::vector<double> b = {-1.0, -1.5};
  const auto rho = ImportanceRatios(a, b);
  EXPECT_EQ(rho[0], 1.0);
  EXPECT_DOUBLE_EQ(rho[1], std::exp(-0.5));
  const std::vector<double> c = {-1.0};
  EXPECT_EQ(CodeOf([&] { ImportanceRatios(a, c); }), ErrorCode::kLengthMismatch);
  EXPECT_EQ(CodeOf([&] { ClippedObjective({{1.0}}, {{1.0, 2.0}}, 0.2, 1); }),
            ErrorCode::kLengthMismatch);
}

TEST(ClipTest, OnPolicyClipFractionIsZero) {
  GrpoConfig cfg;
  cfg.group_size = 8;
  cfg.max_len = 12;
  PolicyParams p = PolicyParams::Create(16, 2, 14, 15, 3, 0.5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::vector<ScoredGroup> groups;
    for (int b = 0; b < 4; ++b) {
      ScoredGroup sg;
      sg.prompt = {b};
      SamplingParams sp;
      sp.group_size = 8;
      sp.max_len = 12;
      sp.seed = seed * 10 + b;
      sg.group = SampleGroup(p, sg.prompt, sp);
      for (std::size_t i = 0; i < 8; ++i) sg.group.rewards.push_back((seed + i + b) % 3 == 0);
      groups.push_back(std::move(sg));
    }
    EXPECT_EQ(StepLoss(p, groups, cfg).clip_fraction, 0.0);
  }
}

TEST(CosineLrTest, Schedule) {
  EXPECT_DOUBLE_EQ(CosineLr(0, 100, 1e-3), 1e-3);
  EXPECT_DOUBLE_EQ(CosineLr(50, 100, 1e-3), 0.5e-3);
  EXPECT_NEAR(CosineLr(100, 100, 1e-3), 0.0, 1e-20);
  EXPECT_NEAR(CosineLr(25, 100, 1.0), 0.5 * (1 + std::cos(M_PI / 4)), 1e-15);
  GrpoConfig cfg;
  cfg.schedule = LrSchedule::kConstant;
  cfg.learning_rate = 0.3;
  EXPECT_EQ(ScheduledLr(cfg, 77, 100), 0.3);
}

TEST(AdamWTest, FirstStepMovesByLrTimesSign) {
  AdamW opt(3, 0.9, 0.999, 1e-8, 0.0);
  std::vector<double> p = {0.0, 0.0, 0.0};
  const std::vector<double> g = {2.0, -0.5, 0.0};
  opt.Step(p, g, 0.01);
  EXPECT_NEAR(p[0], -0.01, 1e-9);
  EXPECT_NEAR(p[1], 0.01, 1e-9);
  EXPECT_EQ(p[2], 0.0);
}

TEST(AdamWTest, DecoupledWeightDecayOnly) {
  AdamW opt(2, 0.9, 0.999, 1e-8, 0.1);
  std::vector<double> p = {1.0, -2.0};
  const std::vector<double> zero = {0.0, 0.0};
  opt.Step(p, zero, 0.5);
  EXPECT_DOUBLE_EQ(p[0], 1.0 - 0.5 * 0.1 * 1.0);
  EXPECT_DOUBLE_EQ(p[1], -2.0 + 0.5 * 0.1 * 2.0);
}

TEST(StepLossTest, GradientMatchesFiniteDifferences) {
  for (int trial = 0; trial < 20; ++trial) {
    GrpoConfig cfg;
    cfg.group_size = 4;
    cfg.max_len = 6;
    cfg.temperature = trial % 2 == 0 ? 1.0 : 0.9;
    cfg.length_normalize = trial % 4 != 3;
    cfg.advantage_mode = trial % 5 == 4 ? AdvantageMode::kStandardized
                                        : AdvantageMode::kMeanSubtract;
    const PolicyParams p = PolicyParams::Create(5, 1, 3, 4, 50 + trial, 0.7);
    const auto groups = testing::RandomScoredGroups(p, cfg, 1000 + trial, 3);
    EXPECT_LT(testing::StepLossFdError(p, groups, cfg), 1e-4) << "trial " << trial;
  }
}

TEST(StepLossTest, HomogeneousRewardsOnlyDecay) {
  GrpoConfig cfg;
  cfg.group_size = 4;
  cfg.max_len = 8;
  cfg.learning_rate = 0.05;
  cfg.schedule = LrSchedule::kConstant;
  cfg.weight_decay = 0.1;
  const PolicyParams init = PolicyParams::Create(6, 2, 4, 5, 9, 0.3);
  for (int reward : {0, 1}) {
    Trainer trainer(init, cfg, ToyPromptFn(1),
                    [reward](const TrainingExample&, const RolloutGroup& g) {
                      return std::vector<int>(g.size(), reward);
                    },
                    10);
    const auto corpus = ToyCorpus(2);
    const StepStats s = trainer.TrainStep(corpus);
    EXPECT_EQ(s.loss, 0.0);
    EXPECT_EQ(s.grad_norm, 0.0);
    for (std::size_t i = 0; i < init.logits.size(); ++i) {
      EXPECT_DOUBLE_EQ(trainer.policy().logits[i], init.logits[i] * (1.0 - 0.05 * 0.1));
    }
  }
}

TEST(TrainerTest, FailedGroupsAreSkipped) {
  GrpoConfig cfg;
  cfg.group_size = 4;
  cfg.max_len = 6;
  Trainer trainer(PolicyParams::Create(6, 1, 4, 5), cfg, ToyPromptFn(1),
                  [](const TrainingExample& ex, const RolloutGroup& g) {
                    if (ex.question.id == "toy-1") throw Error(ErrorCode::kTransport, "down");
                    return std::vector<int>(g.size(), 0);
                  },
                  10);
  const auto corpus = ToyCorpus(3);
  const StepStats s = trainer.TrainStep(corpus);
  EXPECT_EQ(s.groups, 2);
  EXPECT_EQ(s.failed_groups, 1);
}

TEST(TrainerTest, SeedReproducibleAndCheckpointResumes) {
  GrpoConfig cfg;
  cfg.group_size = 8;
  cfg.max_len = 16;
  cfg.learning_rate = 0.05;
  cfg.seed = 17;
  TargetSubsequenceTask task{{3, 7}, 15};
  const auto corpus = ToyCorpus(4);
  auto make = [&] {
    return Trainer(PolicyParams::Create(16, 2, 14, 15), cfg, ToyPromptFn(1), task.MakeReward(),
                   20);
  };
  Trainer a = make(), b = make();
  for (int i = 0; i < 5; ++i) {
    const StepStats sa = a.TrainStep(corpus);
    const StepStats sb = b.TrainStep(corpus);
    EXPECT_EQ(Json(sa).dump(), Json(sb).dump());
  }
  const Json ckpt = a.CheckpointJson();
  Trainer c = make();
  c.RestoreCheckpoint(Json::parse(ckpt.dump()));
  EXPECT_EQ(c.step(), 5);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(Json(a.TrainStep(corpus)).dump(), Json(c.TrainStep(corpus)).dump());
  }
  EXPECT_EQ(a.policy().logits, c.policy().logits);
}

TEST(GrpoConfigTest, ValidationAndJson) {
  GrpoConfig cfg;
  EXPECT_NO_THROW(cfg.Validate());
  cfg.kl_coefficient = 0.05;
  EXPECT_THROW(cfg.Validate(), Error);
  const Json j = Json::parse(R"({"epsilon": 0.3, "advantage_mode": "standardized",
                                 "schedule": "constant"})");
  GrpoConfig c2 = j.get<GrpoConfig>();
  EXPECT_EQ(c2.epsilon, 0.3);
  EXPECT_EQ(c2.advantage_mode, AdvantageMode::kStandardized);
  EXPECT_EQ(c2.schedule, LrSchedule::kConstant);
  EXPECT_EQ(c2.group_size, 8);
  GrpoConfig c3 = Json(c2).get<GrpoConfig>();
  EXPECT_EQ(Json(c3).dump(), Json(c2).dump());
  EXPECT_THROW((Json{{"advantage_mode", "nope"}}.get<GrpoConfig>()), Error);
}

TEST(ToyTaskTest, OrderedSubsequence) {
  TargetSubsequenceTask task{{3, 7, 11}, 15};
  EXPECT_TRUE(task.Matches(std::vector<int>{3, 7, 11}));
  EXPECT_TRUE(task.Matches(std::vector<int>{1, 3, 2, 7, 9, 11, 15}));
  EXPECT_FALSE(task.Matches(std::vector<int>{7, 3, 11}));
  EXPECT_FALSE(task.Matches(std::vector<int>{3, 7, 15, 11}));
  EXPECT_FALSE(task.Matches(std::vector<int>{}));
}

}  // namespace
}  // namespace ideagrpo
