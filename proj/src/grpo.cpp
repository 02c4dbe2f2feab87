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

#include "ideagrpo/grpo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ideagrpo/error.hpp"

namespace ideagrpo {

std::string_view ToString(AdvantageMode m) {
  return m == AdvantageMode::kMeanSubtract ? "mean_subtract" : "standardized";
}

std::string_view ToString(LrSchedule s) {
  return s == LrSchedule::kConstant ? "constant" : "cosine_decay";
}

void GrpoConfig::Validate() const {
  auto bad = [](const std::string& msg) { throw Error(ErrorCode::kInvalidArgument, msg); };
  if (!(epsilon > 0.0 && epsilon < 1.0)) bad("epsilon must lie in (0, 1)");
  if (group_size < 2) bad("group_size must be >= 2");
  if (!(learning_rate > 0.0)) bad("learning_rate must be > 0");
  if (!(weight_decay >= 0.0)) bad("weight_decay must be >= 0");
  if (kl_coefficient != 0.0) bad("kl_coefficient must be 0: no KL penalty is implemented");
  if (epochs < 1) bad("epochs must be >= 1");
  if (batch_size < 1) bad("batch_size must be >= 1");
  if (inner_epochs < 1) bad("inner_epochs must be >= 1");
  if (!(temperature > 0.0)) bad("temperature must be > 0");
  if (max_len < 1) bad("max_len must be >= 1");
  if (!(adam_eps > 0.0)) bad("adam_eps must be > 0");
  if (total_steps < 0) bad("total_steps must be >= 0");
}

void to_json(Json& j, const GrpoConfig& c) {
  j = Json{{"epsilon", c.epsilon},
           {"advantage_mode", ToString(c.advantage_mode)},
           {"length_normalize", c.length_normalize},
           {"learning_rate", c.learning_rate},
           {"weight_decay", c.weight_decay},
           {"kl_coefficient", c.kl_coefficient},
           {"epochs", c.epochs},
           {"batch_size", c.batch_size},
           {"group_size", c.group_size},
           {"schedule", ToString(c.schedule)},
           {"adam_betas", {c.adam_beta1, c.adam_beta2}},
           {"adam_eps", c.adam_eps},
           {"seed", c.seed},
           {"inner_epochs", c.inner_epochs},
           {"temperature", c.temperature},
           {"max_len", c.max_len},
           {"total_steps", c.total_steps}};
}

void from_json(const Json& j, GrpoConfig& c) {
  c.epsilon = j.value("epsilon", c.epsilon);
  if (j.contains("advantage_mode")) {
    const auto m = j.at("advantage_mode").get<std::string>();
    if (m == "mean_subtract") {
      c.advantage_mode = AdvantageMode::kMeanSubtract;
    } else if (m == "standardized") {
      c.advantage_mode = AdvantageMode::kStandardized;
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown advantage_mode '" + m + "'");
    }
  }
  c.length_normalize = j.value("length_normalize", c.length_normalize);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.weight_decay = j.value("weight_decay", c.weight_decay);
  c.kl_coefficient = j.value("kl_coefficient", c.kl_coefficient);
  c.epochs = j.value("epochs", c.epochs);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.group_size = j.value("group_size", c.group_size);
  if (j.contains("schedule")) {
    const auto s = j.at("schedule").get<std::string>();
    if (s == "constant") {
      c.schedule = LrSchedule::kConstant;
    } else if (s == "cosine_decay" || s == "cosine") {
      c.schedule = LrSchedule::kCosineDecay;
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown schedule '" + s + "'");
    }
  }
  if (j.contains("adam_betas")) {
    const auto& b = j.at("adam_betas");
    if (!b.is_array() || b.size() != 2) {
      throw Error(ErrorCode::kInvalidArgument, "adam_betas must be a two-element array");
    }
    c.adam_beta1 = b[0].get<double>();
    c.adam_beta2 = b[1].get<double>();
  }
  c.adam_eps = j.value("adam_eps", c.adam_eps);
  c.seed = j.value("seed", c.seed);
  c.inner_epochs = j.value("inner_epochs", c.inner_epochs);
  c.temperature = j.value("temperature", c.temperature);
  c.max_len = j.value("max_len", c.max_len);
  c.total_steps = j.value("total_steps", c.total_steps);
}

void to_json(Json& j, const StepStats& s) {
  j = Json{{"step", s.step},
           {"loss", s.loss},
           {"mean_reward", s.mean_reward},
           {"clip_fraction", s.clip_fraction},
           {"grad_norm", s.grad_norm},
           {"lr", s.lr},
           {"kl_coefficient", s.kl_coefficient},
           {"groups", s.groups},
           {"failed_groups", s.failed_groups}};
}

std::vector<double> SequenceAdvantages(std::span<const int> rewards, AdvantageMode mode) {
  const std::size_t g = rewards.size();
  if (g < 2) throw Error(ErrorCode::kEmptyGroup, "advantages need a group of size >= 2");
  for (int r : rewards) {
    if (r != 0 && r != 1) throw Error(ErrorCode::kNonBinaryReward, std::to_string(r));
  }
  const long total = std::accumulate(rewards.begin(), rewards.end(), 0L);
  const double n = static_cast<double>(g);
  std::vector<double> adv(g);
  // (G*R_i - S) / G keeps the numerators integral so the group sums to zero
  // up to the rounding of a single division.
  for (std::size_t i = 0; i < g; ++i) {
    adv[i] = static_cast<double>(static_cast<long>(g) * rewards[i] - total) / n;
  }
  if (mode == AdvantageMode::kStandardized) {
    double var = 0.0;
    for (double a : adv) var += a * a;
    const double sd = std::sqrt(var / n);
    if (sd == 0.0) {
      throw Error(ErrorCode::kDegenerateGroup, "reward std is 0; treat the group as zero-advantage");
    }
    for (double& a : adv) a /= sd;
  }
  return adv;
}

std::vector<double> LengthWeights(std::span<const std::size_t> lengths) {
  if (lengths.empty()) throw Error(ErrorCode::kEmptyGroup, "no lengths");
  double mean_inv = 0.0;
  for (std::size_t len : lengths) {
    if (len == 0) throw Error(ErrorCode::kZeroLength, "sequence of length 0");
    mean_inv += 1.0 / static_cast<double>(len);
  }
  mean_inv /= static_cast<double>(lengths.size());
  std::vector<double> w;
  w.reserve(lengths.size());
  for (std::size_t len : lengths) w.push_back((1.0 / static_cast<double>(len)) / mean_inv);
  return w;
}

Ragged TokenAdvantages(std::span<const double> advantages, std::span<const double> weights,
                       std::span<const std::size_t> lengths, bool length_normalize) {
  if (advantages.size() != lengths.size() ||
      (length_normalize && weights.size() != lengths.size())) {
    throw Error(ErrorCode::kLengthMismatch, "advantages, weights and lengths must align");
  }
  Ragged out(lengths.size());
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const double a = length_normalize ? advantages[i] * weights[i] : advantages[i];
    out[i].assign(lengths[i], a);
  }
  return out;
}

std::vector<double> ImportanceRatios(std::span<const double> new_logprobs,
                                     std::span<const double> old_logprobs) {
  if (new_logprobs.size() != old_logprobs.size()) {
    throw Error(ErrorCode::kLengthMismatch, "new/old logprob sequences differ in length");
  }
  std::vector<double> rho(new_logprobs.size());
  for (std::size_t t = 0; t < rho.size(); ++t) {
    if (!std::isfinite(new_logprobs[t]) || !std::isfinite(old_logprobs[t])) {
      throw Error(ErrorCode::kInvalidArgument, "non-finite logprob");
    }
    rho[t] = std::exp(new_logprobs[t] - old_logprobs[t]);
  }
  return rho;
}

ClipResult ClippedObjective(const Ragged& ratios, const Ragged& token_advantages,
                            double epsilon, std::size_t group_size) {
  if (ratios.size() != token_advantages.size()) {
    throw Error(ErrorCode::kLengthMismatch, "ratio and advantage groups differ in size");
  }
  if (group_size == 0) throw Error(ErrorCode::kEmptyGroup, "group_size is 0");
  double sum = 0.0;
  std::size_t tokens = 0, clipped = 0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (ratios[i].size() != token_advantages[i].size()) {
      throw Error(ErrorCode::kLengthMismatch, "sequence " + std::to_string(i));
    }
    for (std::size_t t = 0; t < ratios[i].size(); ++t) {
      const double rho = ratios[i][t];
      const double a = token_advantages[i][t];
      const double unclipped = rho * a;
      const double clipped_term = std::clamp(rho, 1.0 - epsilon, 1.0 + epsilon) * a;
      if (clipped_term < unclipped) {
        sum += clipped_term;
        ++clipped;
      } else {
        sum += unclipped;
      }
      ++tokens;
    }
  }
  ClipResult r;
  r.objective = sum / static_cast<double>(group_size);
  r.clip_fraction = tokens == 0 ? 0.0 : static_cast<double>(clipped) / tokens;
  return r;
}

double CosineLr(long step, long total_steps, double base_lr) {
  if (total_steps <= 0) return base_lr;
  const double frac = std::clamp(static_cast<double>(step) / total_steps, 0.0, 1.0);
  return 0.5 * base_lr * (1.0 + std::cos(M_PI * frac));
}

double ScheduledLr(const GrpoConfig& cfg, long step, long total_steps) {
  return cfg.schedule == LrSchedule::kConstant ? cfg.learning_rate
                                               : CosineLr(step, total_steps, cfg.learning_rate);
}

AdamW::AdamW(std::size_t num_params, double beta1, double beta2, double eps,
             double weight_decay)
    : beta1_(beta1), beta2_(beta2), eps_(eps), weight_decay_(weight_decay),
      m_(num_params, 0.0), v_(num_params, 0.0) {}

void AdamW::Step(std::span<double> params, std::span<const double> grad, double lr) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    throw Error(ErrorCode::kLengthMismatch, "AdamW parameter count changed");
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
    const double mhat = m_[i] / bc1;
    const double vhat = v_[i] / bc2;
    params[i] -= lr * (mhat / (std::sqrt(vhat) + eps_) + weight_decay_ * params[i]);
  }
}

Json AdamW::ToJson() const { return Json{{"t", t_}, {"m", m_}, {"v", v_}}; }

void AdamW::LoadJson(const Json& j) {
  auto m = j.at("m").get<std::vector<double>>();
  auto v = j.at("v").get<std::vector<double>>();
  if (m.size() != m_.size() || v.size() != v_.size()) {
    throw Error(ErrorCode::kMalformed, "optimizer state does not match the policy");
  }
  t_ = j.at("t").get<long>();
  m_ = std::move(m);
  v_ = std::move(v);
}

LossGrad StepLoss(const PolicyParams& params, std::span<const ScoredGroup> groups,
                  const GrpoConfig& cfg, bool want_grad) {
  LossGrad out;
  if (groups.empty()) {
    if (want_grad) out.grad.assign(params.num_params(), 0.0);
    return out;
  }
  const double inv_groups = 1.0 / static_cast<double>(groups.size());
  std::vector<TokenTerm> terms;
  std::vector<double> logp(params.vocab_size);
  std::size_t tokens = 0, clipped = 0;
  double objective_sum = 0.0;

  for (const ScoredGroup& sg : groups) {
    const RolloutGroup& g = sg.group;
    ValidateGroup(g);
    std::vector<double> adv;
    try {
      adv = SequenceAdvantages(g.rewards, cfg.advantage_mode);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateGroup) throw;
      adv.assign(g.size(), 0.0);
    }
    std::vector<std::size_t> lengths;
    for (const Rollout& r : g.rollouts) lengths.push_back(r.length());
    const auto weights = LengthWeights(lengths);
    const Ragged token_adv = TokenAdvantages(adv, weights, lengths, cfg.length_normalize);
    const double g_size = static_cast<double>(g.size());

    double group_sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Rollout& r = g.rollouts[i];
      const auto rows = ContextRows(params, sg.prompt, r.tokens);
      for (std::size_t t = 0; t < rows.size(); ++t) {
        LogSoftmax(params.row(rows[t]), cfg.temperature, logp);
        const double rho = std::exp(logp[r.tokens[t]] - r.behavior_logprobs[t]);
        const double a = token_adv[i][t];
        const double unclipped = rho * a;
        const double clipped_term =
            std::clamp(rho, 1.0 - cfg.epsilon, 1.0 + cfg.epsilon) * a;
        ++tokens;
        if (clipped_term < unclipped) {
          group_sum += clipped_term;
          ++clipped;
          continue;  // constant branch: no gradient
        }
        group_sum += unclipped;
        if (want_grad && a != 0.0) {
          // d(-rho*a/G)/dtheta = -(a*rho/G) dlogpi/dtheta, averaged over groups.
          terms.push_back({rows[t], r.tokens[t], -a * rho / g_size * inv_groups});
        }
      }
    }
    objective_sum += group_sum / g_size;
  }
  out.loss = -objective_sum * inv_groups;
  out.clip_fraction = tokens == 0 ? 0.0 : static_cast<double>(clipped) / tokens;
  if (want_grad) out.grad = LogprobGrad(params, terms, cfg.temperature);
  return out;
}

Trainer::Trainer(PolicyParams policy, GrpoConfig cfg, PromptFn prompt_fn, RewardFn reward_fn,
                 long total_steps)
    : policy_(std::move(policy)),
      cfg_(cfg),
      prompt_fn_(std::move(prompt_fn)),
      reward_fn_(std::move(reward_fn)),
      opt_(policy_.num_params(), cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps,
           cfg.weight_decay),
      total_steps_(std::max(1L, total_steps)) {
  policy_.Validate();
  cfg_.Validate();
}

StepStats Trainer::TrainStep(std::span<const TrainingExample> batch) {
  StepStats stats;
  stats.step = static_cast<int>(step_);
  stats.lr = ScheduledLr(cfg_, step_, total_steps_);
  stats.kl_coefficient = cfg_.kl_coefficient;

  std::vector<ScoredGroup> scored;
  long reward_sum = 0, reward_count = 0;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const TrainingExample& ex = batch[b];
    ScoredGroup sg;
    sg.prompt = prompt_fn_(ex);
    SamplingParams sp;
    sp.temperature = cfg_.temperature;
    sp.max_len = cfg_.max_len;
    sp.group_size = cfg_.group_size;
    sp.seed = MixSeed(MixSeed(cfg_.seed, static_cast<std::uint64_t>(step_)), b);
    sg.group = SampleGroup(policy_, sg.prompt, sp);
    sg.group.question = ex.question;
    sg.group.golden = ex.golden;
    if (hook_) {
      for (Rollout& r : sg.group.rollouts) hook_(r);
    }
    try {
      sg.group.rewards = reward_fn_(ex, sg.group);
      ValidateGroup(sg.group);
    } catch (const std::exception&) {
      ++stats.failed_groups;
      continue;
    }
    for (int r : sg.group.rewards) reward_sum += r;
    reward_count += static_cast<long>(sg.group.rewards.size());
    scored.push_back(std::move(sg));
  }
  stats.groups = static_cast<int>(scored.size());
  stats.mean_reward = reward_count == 0 ? 0.0 : static_cast<double>(reward_sum) / reward_count;

  if (!scored.empty()) {
    double loss_sum = 0.0, clip_sum = 0.0;
    for (int pass = 0; pass < cfg_.inner_epochs; ++pass) {
      LossGrad lg = StepLoss(policy_, scored, cfg_);
      double sq = 0.0;
      for (double g : lg.grad) sq += g * g;
      stats.grad_norm = std::sqrt(sq);
      loss_sum += lg.loss;
      clip_sum += lg.clip_fraction;
      opt_.Step(policy_.logits, lg.grad, stats.lr);
    }
    stats.loss = loss_sum / cfg_.inner_epochs;
    stats.clip_fraction = clip_sum / cfg_.inner_epochs;
  }
  ++step_;
  return stats;
}

Json Trainer::CheckpointJson() const {
  return Json{{"format", "ideagrpo.trainer"},
              {"version", 1},
              {"step", step_},
              {"total_steps", total_steps_},
              {"config", cfg_},
              {"policy", PolicyToJson(policy_)},
              {"optimizer", opt_.ToJson()}};
}

void Trainer::RestoreCheckpoint(const Json& j) {
  if (j.value("format", std::string()) != "ideagrpo.trainer") {
    throw Error(ErrorCode::kMalformed, "not a trainer checkpoint");
  }
  PolicyParams p = PolicyFromJson(j.at("policy"));
  if (p.num_params() != policy_.num_params()) {
    throw Error(ErrorCode::kMalformed, "checkpoint policy shape differs from configuration");
  }
  opt_.LoadJson(j.at("optimizer"));
  policy_ = std::move(p);
  step_ = j.at("step").get<long>();
}

}  // namespace ideagrpo
