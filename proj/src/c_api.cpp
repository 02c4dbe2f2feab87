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

#include "ideagrpo_c.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "ideagrpo/backend.hpp"
#include "ideagrpo/error.hpp"
#include "ideagrpo/evalharness.hpp"
#include "ideagrpo/grpo.hpp"
#include "ideagrpo/judge.hpp"
#include "ideagrpo/policy.hpp"
#include "ideagrpo/runner.hpp"
#include "ideagrpo/toytask.hpp"

struct igr_policy {
  ideagrpo::PolicyParams params;
};

struct igr_backend {
  std::shared_ptr<ideagrpo::Backend> impl;
};

struct igr_judge {
  ideagrpo::Judge judge;
};

struct igr_trainer {
  std::unique_ptr<ideagrpo::Trainer> trainer;
  std::vector<ideagrpo::TrainingExample> corpus;
};

namespace {

using ideagrpo::Error;
using ideagrpo::ErrorCode;
using ideagrpo::Json;

thread_local std::string g_last_error;

igr_status Fail(igr_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
igr_status Guard(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return IGR_OK;
  } catch (const Error& e) {
    return Fail(static_cast<igr_status>(static_cast<int>(e.code())), e.what());
  } catch (const Json::exception& e) {
    return Fail(IGR_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return Fail(IGR_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(IGR_ERR_INTERNAL, "unknown exception");
  }
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void Require(bool cond, const char* what) {
  if (!cond) throw Error(ErrorCode::kInvalidArgument, what);
}

Json ParseArg(const char* text, const char* what) {
  if (text == nullptr || *text == '\0') return Json::object();
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " is not JSON");
  return j;
}

ideagrpo::CompletionRequest RequestFromJson(const Json& j) {
  ideagrpo::CompletionRequest req;
  for (const Json& m : j.at("messages")) {
    const std::string role = m.at("role").get<std::string>();
    ideagrpo::ChatRole r = ideagrpo::ChatRole::kUser;
    if (role == "system") {
      r = ideagrpo::ChatRole::kSystem;
    } else if (role == "assistant") {
      r = ideagrpo::ChatRole::kAssistant;
    } else if (role != "user") {
      throw Error(ErrorCode::kInvalidArgument, "unknown message role '" + role + "'");
    }
    req.messages.push_back({r, m.at("content").get<std::string>()});
  }
  req.temperature = j.value("temperature", req.temperature);
  req.max_tokens = j.value("max_tokens", req.max_tokens);
  req.model = j.value("model", req.model);
  const Json route = j.value("route", Json::object());
  req.route.scope = route.value("scope", std::string());
  req.route.role = route.value("role", std::string());
  req.route.round = route.value("round", 1);
  req.route.agent_index = route.value("agent_index", 0);
  req.route.attempt = route.value("attempt", 0);
  req.Validate();
  return req;
}

}  // namespace

extern "C" {

const char* igr_version(void) { return "0.1.0"; }

const char* igr_status_name(igr_status status) {
  if (status == IGR_OK) return "Ok";
  if (status == IGR_ERR_INTERNAL) return "Internal";
  if (status < IGR_ERR_INVALID_ARGUMENT || status > IGR_ERR_IO) return "Unknown";
  return ideagrpo::ErrorCodeName(static_cast<ErrorCode>(static_cast<int>(status))).data();
}

const char* igr_last_error(void) { return g_last_error.c_str(); }

void igr_string_free(char* s) { std::free(s); }

igr_status igr_policy_create(int vocab_size, int context_order, int bos, int eos,
                             uint64_t init_seed, double init_std, igr_policy** out) {
  return Guard([&] {
    Require(out != nullptr, "out is null");
    auto p = std::make_unique<igr_policy>();
    p->params =
        ideagrpo::PolicyParams::Create(vocab_size, context_order, bos, eos, init_seed, init_std);
    p->params.Validate();
    *out = p.release();
  });
}

igr_status igr_policy_load(const char* path, igr_policy** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    auto p = std::make_unique<igr_policy>();
    p->params = ideagrpo::LoadPolicy(path);
    *out = p.release();
  });
}

igr_status igr_policy_save(const igr_policy* policy, const char* path) {
  return Guard([&] {
    Require(policy != nullptr && path != nullptr, "null argument");
    ideagrpo::SavePolicy(policy->params, path);
  });
}

void igr_policy_free(igr_policy* policy) { delete policy; }

igr_status igr_policy_sample(const igr_policy* policy, const int* prompt, size_t prompt_len,
                             const char* sampling_json, char** out_group_json) {
  return Guard([&] {
    Require(policy != nullptr && out_group_json != nullptr, "null argument");
    Require(prompt != nullptr || prompt_len == 0, "prompt is null");
    const Json j = ParseArg(sampling_json, "sampling_json");
    ideagrpo::SamplingParams sp;
    sp.temperature = j.value("temperature", sp.temperature);
    sp.max_len = j.value("max_len", sp.max_len);
    sp.group_size = j.value("group_size", sp.group_size);
    sp.seed = j.value("seed", sp.seed);
    sp.greedy = j.value("greedy", sp.greedy);
    const auto group = ideagrpo::SampleGroup(
        policy->params, std::span<const int>(prompt, prompt_len), sp);
    *out_group_json = CopyString(Json(group).dump());
  });
}

igr_status igr_policy_logprobs(const igr_policy* policy, const int* prompt, size_t prompt_len,
                               const int* tokens, size_t n_tokens, double temperature,
                               double* out) {
  return Guard([&] {
    Require(policy != nullptr && out != nullptr, "null argument");
    Require(prompt != nullptr || prompt_len == 0, "prompt is null");
    Require(tokens != nullptr || n_tokens == 0, "tokens is null");
    ideagrpo::Rollout r;
    r.tokens.assign(tokens, tokens + n_tokens);
    const auto lp = ideagrpo::SequenceLogprobs(
        policy->params, r, std::span<const int>(prompt, prompt_len), temperature);
    std::copy(lp.begin(), lp.end(), out);
  });
}

igr_status igr_sequence_advantages(const int* rewards, size_t group_size,
                                   igr_advantage_mode mode, double* out) {
  return Guard([&] {
    Require(rewards != nullptr && out != nullptr, "null argument");
    const auto adv = ideagrpo::SequenceAdvantages(
        std::span<const int>(rewards, group_size),
        mode == IGR_ADVANTAGE_STANDARDIZED ? ideagrpo::AdvantageMode::kStandardized
                                           : ideagrpo::AdvantageMode::kMeanSubtract);
    std::copy(adv.begin(), adv.end(), out);
  });
}

igr_status igr_length_weights(const size_t* lengths, size_t group_size, double* out) {
  return Guard([&] {
    Require(lengths != nullptr && out != nullptr, "null argument");
    const auto w = ideagrpo::LengthWeights(std::span<const std::size_t>(lengths, group_size));
    std::copy(w.begin(), w.end(), out);
  });
}

igr_status igr_cosine_lr(long step, long total_steps, double base_lr, double* out) {
  return Guard([&] {
    Require(out != nullptr, "out is null");
    *out = ideagrpo::CosineLr(step, total_steps, base_lr);
  });
}

igr_status igr_clipped_objective(const double* ratios, const double* token_advantages,
                                 size_t n_tokens, double epsilon, size_t group_size,
                                 double* out_objective, double* out_clip_fraction) {
  return Guard([&] {
    Require(ratios != nullptr && token_advantages != nullptr, "null argument");
    ideagrpo::Ragged rho{std::vector<double>(ratios, ratios + n_tokens)};
    ideagrpo::Ragged adv{std::vector<double>(token_advantages, token_advantages + n_tokens)};
    const auto r = ideagrpo::ClippedObjective(rho, adv, epsilon, group_size);
    if (out_objective) *out_objective = r.objective;
    if (out_clip_fraction) *out_clip_fraction = r.clip_fraction;
  });
}

igr_status igr_backend_create(const char* spec_json, igr_backend** out) {
  return Guard([&] {
    Require(out != nullptr, "out is null");
    auto b = std::make_unique<igr_backend>();
    b->impl = ideagrpo::MakeBackend(ParseArg(spec_json, "spec_json"));
    *out = b.release();
  });
}

void igr_backend_free(igr_backend* backend) { delete backend; }

igr_status igr_backend_complete(igr_backend* backend, const char* request_json,
                                char** out_text) {
  return Guard([&] {
    Require(backend != nullptr && out_text != nullptr, "null argument");
    const auto req = RequestFromJson(ParseArg(request_json, "request_json"));
    *out_text = CopyString(backend->impl->Complete(req));
  });
}

igr_status igr_judge_create(const char* judge_json, igr_judge** out) {
  return Guard([&] {
    Require(out != nullptr, "out is null");
    const Json j = ParseArg(judge_json, "judge_json");
    auto h = std::make_unique<igr_judge>();
    if (j.contains("prompts_dir")) {
      h->judge.prompts =
          ideagrpo::PromptLibrary::LoadOverrides(j["prompts_dir"].get<std::string>());
    }
    if (j.contains("strategy")) {
      h->judge.strategy = ideagrpo::ParseJudgeStrategy(j["strategy"].get<std::string>());
    }
    if (j.contains("arch")) h->judge.arch = ideagrpo::ParseArchitecture(j["arch"]);
    if (j.contains("options")) h->judge.options = j["options"].get<ideagrpo::JudgeOptions>();
    *out = h.release();
  });
}

void igr_judge_free(igr_judge* judge) { delete judge; }

igr_status igr_judge_run(const igr_judge* judge, igr_backend* backend, const char* case_json,
                         char** out_result_json) {
  return Guard([&] {
    Require(judge != nullptr && backend != nullptr && out_result_json != nullptr,
            "null argument");
    const auto jc = ParseArg(case_json, "case_json").get<ideagrpo::JudgeCase>();
    const auto r = judge->judge.Run(jc, *backend->impl);
    *out_result_json = CopyString(Json{{"verdict", r.verdict},
                                       {"transcript", r.transcript},
                                       {"backend_calls", r.backend_calls}}
                                      .dump());
  });
}

igr_status igr_parse_evaluator_output(const char* text, char** out_verdict_json) {
  return Guard([&] {
    Require(text != nullptr && out_verdict_json != nullptr, "null argument");
    *out_verdict_json = CopyString(Json(ideagrpo::ParseEvaluatorOutput(text)).dump());
  });
}

igr_status igr_trainer_create(const char* config_json, long total_steps, igr_trainer** out) {
  return Guard([&] {
    Require(out != nullptr, "out is null");
    Require(total_steps >= 1, "total_steps must be >= 1");
    const Json cfg_json = ParseArg(config_json, "config_json");
    auto cfg = cfg_json.value("grpo", Json::object()).get<ideagrpo::GrpoConfig>();
    cfg.seed = cfg_json.value("seed", cfg.seed);
    cfg.Validate();
    const auto task = cfg_json.value("task", Json::object()).get<ideagrpo::ToyTaskConfig>();
    auto h = std::make_unique<igr_trainer>();
    h->corpus = ideagrpo::ToyCorpus(task.corpus_size);
    h->trainer = std::make_unique<ideagrpo::Trainer>(
        task.MakePolicy(cfg.seed), cfg, ideagrpo::ToyPromptFn(task.prompt_tokens),
        ideagrpo::TargetSubsequenceTask{task.target, task.eos}.MakeReward(), total_steps);
    *out = h.release();
  });
}

void igr_trainer_free(igr_trainer* trainer) { delete trainer; }

igr_status igr_trainer_step(igr_trainer* trainer, char** out_stats_json) {
  return Guard([&] {
    Require(trainer != nullptr, "trainer is null");
    const auto& cfg = trainer->trainer->config();
    std::vector<ideagrpo::TrainingExample> batch;
    const long s = trainer->trainer->step();
    for (int b = 0; b < cfg.batch_size; ++b) {
      batch.push_back(trainer->corpus[static_cast<std::size_t>(
          (s * cfg.batch_size + b) % static_cast<long>(trainer->corpus.size()))]);
    }
    const auto stats = trainer->trainer->TrainStep(batch);
    if (out_stats_json) *out_stats_json = CopyString(Json(stats).dump());
  });
}

igr_status igr_trainer_policy(const igr_trainer* trainer, igr_policy** out_copy) {
  return Guard([&] {
    Require(trainer != nullptr && out_copy != nullptr, "null argument");
    auto p = std::make_unique<igr_policy>();
    p->params = trainer->trainer->policy();
    *out_copy = p.release();
  });
}

igr_status igr_compute_metrics(const int* predicted, const int* labels, size_t n,
                               char** out_report_json) {
  return Guard([&] {
    Require(out_report_json != nullptr, "out is null");
    Require((predicted != nullptr && labels != nullptr) || n == 0, "null argument");
    std::vector<ideagrpo::LabeledVerdict> lv;
    lv.reserve(n);
    for (size_t i = 0; i < n; ++i) lv.push_back({std::to_string(i), predicted[i], labels[i]});
    *out_report_json = CopyString(Json(ideagrpo::ComputeMetrics(lv)).dump());
  });
}

igr_status igr_normalize_scores(const double* raw, size_t n, double* out) {
  return Guard([&] {
    Require((raw != nullptr && out != nullptr) || n == 0, "null argument");
    const auto norm = ideagrpo::NormalizeScores(std::span<const double>(raw, n));
    std::copy(norm.begin(), norm.end(), out);
  });
}

igr_status igr_command_run(const char* command_json, int* exit_code, char** out_stdout,
                           char** out_stderr) {
  return Guard([&] {
    Require(exit_code != nullptr, "exit_code is null");
    const auto r = ideagrpo::RunCommand(ParseArg(command_json, "command_json"));
    *exit_code = r.exit_code;
    if (out_stdout) *out_stdout = CopyString(r.out);
    if (out_stderr) *out_stderr = CopyString(r.err);
  });
}

}  // extern "C"
