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

#ifndef IDEAGRPO_GRPO_HPP_
#define IDEAGRPO_GRPO_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ideagrpo/domain.hpp"
#include "ideagrpo/policy.hpp"

namespace ideagrpo {

// kMeanSubtract: A_i = R_i - mean(R), no scaling.
// kStandardized: A_i = (R_i - mean(R)) / std(R) (population std).
enum class AdvantageMode { kMeanSubtract, kStandardized };
enum class LrSchedule { kConstant, kCosineDecay };

std::string_view ToString(AdvantageMode m);
std::string_view ToString(LrSchedule s);

struct GrpoConfig {
  double epsilon = 0.2;
  AdvantageMode advantage_mode = AdvantageMode::kMeanSubtract;
  bool length_normalize = true;
  double learning_rate = 1e-5;
  double weight_decay = 0.1;
  // Only 0 is supported: no KL term is added to the loss.
  double kl_coefficient = 0.0;
  int epochs = 15;
  int batch_size = 8;
  int group_size = 8;
  LrSchedule schedule = LrSchedule::kCosineDecay;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 0;
  // Optimizer passes over each freshly sampled batch. Passes after the first
  // are off-policy, so importance ratios leave 1 and clipping engages.
  int inner_epochs = 1;
  double temperature = 1.0;
  int max_len = 32;
  // 0 derives epochs * ceil(corpus / batch_size).
  int total_steps = 0;

  void Validate() const;
};

void to_json(Json& j, const GrpoConfig& c);
// Missing keys keep their defaults, so a config file may override any subset.
void from_json(const Json& j, GrpoConfig& c);

struct StepStats {
  int step = 0;
  double loss = 0.0;
  double mean_reward = 0.0;
  double clip_fraction = 0.0;
  double grad_norm = 0.0;
  double lr = 0.0;
  double kl_coefficient = 0.0;
  int groups = 0;
  int failed_groups = 0;
};

void to_json(Json& j, const StepStats& s);

std::vector<double> SequenceAdvantages(std::span<const int> rewards, AdvantageMode mode);

// w_i = |o_i|^-1 / mean_j(|o_j|^-1).
std::vector<double> LengthWeights(std::span<const std::size_t> lengths);

using Ragged = std::vector<std::vector<double>>;

// A_{i,t} = A_i * w_i for every t < lengths[i]; with length_normalize false
// the weights are ignored and A_{i,t} = A_i.
Ragged TokenAdvantages(std::span<const double> advantages, std::span<const double> weights,
                       std::span<const std::size_t> lengths, bool length_normalize = true);

std::vector<double> ImportanceRatios(std::span<const double> new_logprobs,
                                     std::span<const double> old_logprobs);

struct ClipResult {
  double objective = 0.0;
  double clip_fraction = 0.0;
};

// (1/G) sum_i sum_t min(rho A, clip(rho, 1-eps, 1+eps) A). This is maximized;
// the training loss is its negation.
ClipResult ClippedObjective(const Ragged& ratios, const Ragged& token_advantages,
                            double epsilon, std::size_t group_size);

double CosineLr(long step, long total_steps, double base_lr);
double ScheduledLr(const GrpoConfig& cfg, long step, long total_steps);

// Decoupled weight decay Adam.
class AdamW {
 public:
  AdamW(std::size_t num_params, double beta1, double beta2, double eps, double weight_decay);

  void Step(std::span<double> params, std::span<const double> grad, double lr);

  long steps() const { return t_; }
  Json ToJson() const;
  void LoadJson(const Json& j);

 private:
  double beta1_, beta2_, eps_, weight_decay_;
  long t_ = 0;
  std::vector<double> m_, v_;
};

// A rewarded group with the prompt it was sampled from.
struct ScoredGroup {
  std::vector<int> prompt;
  RolloutGroup group;
};

struct LossGrad {
  double loss = 0.0;
  double clip_fraction = 0.0;
  std::vector<double> grad;
};

// Step loss: the mean over groups of -ClippedObjective, with ratios taken
// against each rollout's behavior_logprobs. Returns the exact subgradient
// that uses the unclipped branch wherever the two branches tie.
LossGrad StepLoss(const PolicyParams& params, std::span<const ScoredGroup> groups,
                  const GrpoConfig& cfg, bool want_grad = true);

// Rewards for one sampled group. Throwing marks the group as failed.
using RewardFn = std::function<std::vector<int>(const TrainingExample&, const RolloutGroup&)>;
// Maps an example to policy prompt tokens.
using PromptFn = std::function<std::vector<int>(const TrainingExample&)>;
// Hook applied to every sampled rollout before rewarding (e.g. to split
// reasoning/answer out of the decoded text).
using RolloutHook = std::function<void(Rollout&)>;

class Trainer {
 public:
  Trainer(PolicyParams policy, GrpoConfig cfg, PromptFn prompt_fn, RewardFn reward_fn,
          long total_steps);

  // Sample, reward, and apply one AdamW update. Groups whose reward_fn
  // throws are skipped and counted.
  StepStats TrainStep(std::span<const TrainingExample> batch);

  void set_rollout_hook(RolloutHook hook) { hook_ = std::move(hook); }

  const PolicyParams& policy() const { return policy_; }
  PolicyParams& mutable_policy() { return policy_; }
  const GrpoConfig& config() const { return cfg_; }
  long step() const { return step_; }
  long total_steps() const { return total_steps_; }

  Json CheckpointJson() const;
  void RestoreCheckpoint(const Json& j);

 private:
  PolicyParams policy_;
  GrpoConfig cfg_;
  PromptFn prompt_fn_;
  RewardFn reward_fn_;
  RolloutHook hook_;
  AdamW opt_;
  long step_ = 0;
  long total_steps_ = 1;
};

}  // namespace ideagrpo

#endif  // IDEAGRPO_GRPO_HPP_
