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
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "ideagrpo_c.h"

namespace {

using nlohmann::json;

// Takes ownership of a library string.
std::string Take(char* s) {
  std::string out = s ? s : "";
  igr_string_free(s);
  return out;
}

const char* kEvaluatorMatch =
    "<summarization>s</summarization><reasoning>r</reasoning>\n"
    "```json\n{\"match\": true, \"reward\": 1, \"reason\": \"same\"}\n```";

TEST(CApiTest, VersionAndStatusNames) {
  EXPECT_STREQ(igr_version(), "0.1.0");
  EXPECT_STREQ(igr_status_name(IGR_OK), "Ok");
  EXPECT_STRNE(igr_status_name(IGR_ERR_CACHE_MISS), igr_status_name(IGR_ERR_IO));
}

TEST(CApiTest, PolicyLifecycle) {
  igr_policy* p = nullptr;
  ASSERT_EQ(igr_policy_create(3, 1, 0, 2, 0, 0.0, &p), IGR_OK);
  const int prompt[] = {0};
  const int toks[] = {1, 2};
  double lp[2];
  ASSERT_EQ(igr_policy_logprobs(p, prompt, 1, toks, 2, 1.0, lp), IGR_OK);
  EXPECT_NEAR(lp[0], std::log(1.0 / 3.0), 1e-12);
  const int bad[] = {7};
  EXPECT_EQ(igr_policy_logprobs(p, prompt, 1, bad, 1, 1.0, lp), IGR_ERR_INVALID_TOKEN);
  EXPECT_NE(std::string(igr_last_error()).find("7"), std::string::npos);

  char* group = nullptr;
  ASSERT_EQ(igr_policy_sample(p, prompt, 1, R"({"group_size": 4, "max_len": 5, "seed": 9})",
                              &group),
            IGR_OK);
  const json g = json::parse(Take(group));
  EXPECT_EQ(g["rollouts"].size(), 4u);

  const auto path = std::filesystem::path(IGR_TEST_TMP) / "c_api_policy.json";
  std::filesystem::create_directories(path.parent_path());
  ASSERT_EQ(igr_policy_save(p, path.c_str()), IGR_OK);
  igr_policy* q = nullptr;
  ASSERT_EQ(igr_policy_load(path.c_str(), &q), IGR_OK);
  double lq[2];
  ASSERT_EQ(igr_policy_logprobs(q, prompt, 1, toks, 2, 1.0, lq), IGR_OK);
  EXPECT_EQ(lp[1], lq[1]);
  igr_policy_free(q);
  igr_policy_free(p);
  igr_policy_free(nullptr);
  EXPECT_EQ(igr_policy_create(3, 1, 0, 2, 0, 0.0, nullptr), IGR_ERR_INVALID_ARGUMENT);
}

TEST(CApiTest, OptimizerArithmetic) {
  const int rewards[] = {1, 0, 0, 1};
  double adv[4];
  ASSERT_EQ(igr_sequence_advantages(rewards, 4, IGR_ADVANTAGE_MEAN_SUBTRACT, adv), IGR_OK);
  EXPECT_EQ(adv[0], 0.5);
  EXPECT_EQ(adv[1], -0.5);
  const int flat[] = {1, 1};
  EXPECT_EQ(igr_sequence_advantages(flat, 2, IGR_ADVANTAGE_STANDARDIZED, adv),
            IGR_ERR_DEGENERATE_GROUP);
  const int two[] = {2, 0};
  EXPECT_EQ(igr_sequence_advantages(two, 2, IGR_ADVANTAGE_MEAN_SUBTRACT, adv),
            IGR_ERR_NON_BINARY_REWARD);

  const size_t lengths[] = {2, 4};
  double w[2];
  ASSERT_EQ(igr_length_weights(lengths, 2, w), IGR_OK);
  EXPECT_NEAR(w[0], 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(w[1], 2.0 / 3.0, 1e-15);
  const size_t zero[] = {0, 3};
  EXPECT_EQ(igr_length_weights(zero, 2, w), IGR_ERR_ZERO_LENGTH);

  double lr = 0;
  ASSERT_EQ(igr_cosine_lr(50, 100, 1e-3, &lr), IGR_OK);
  EXPECT_NEAR(lr, 5e-4, 1e-15);

  const double ratios[] = {3.0, 0.5};
  const double advs[] = {2.0, 2.0};
  double obj = 0, cf = 0;
  ASSERT_EQ(igr_clipped_objective(ratios, advs, 1, 0.2, 1, &obj, &cf), IGR_OK);
  EXPECT_DOUBLE_EQ(obj, 2.4);
  EXPECT_EQ(cf, 1.0);
  const double neg[] = {-2.0};
  ASSERT_EQ(igr_clipped_objective(ratios + 1, neg, 1, 0.2, 1, &obj, &cf), IGR_OK);
  EXPECT_DOUBLE_EQ(obj, -1.6);
}

TEST(CApiTest, ScriptedBackendAndJudge) {
  const json spec = {{"kind", "scripted"},
                     {"playbook", {{"analyst", "turn"}, {"evaluator", kEvaluatorMatch}}}};
  igr_backend* b = nullptr;
  ASSERT_EQ(igr_backend_create(spec.dump().c_str(), &b), IGR_OK);
  char* text = nullptr;
  ASSERT_EQ(igr_backend_complete(
                b, R"({"messages":[{"role":"user","content":"hi"}],"route":{"role":"analyst"}})",
                &text),
            IGR_OK);
  EXPECT_EQ(Take(text), "turn");
  EXPECT_EQ(igr_backend_complete(
                b, R"({"messages":[{"role":"user","content":"hi"}],"route":{"role":"critic"}})",
                &text),
            IGR_ERR_PLAYBOOK_MISS);

  igr_judge* j = nullptr;
  ASSERT_EQ(igr_judge_create(nullptr, &j), IGR_OK);
  std::string idea;
  for (int i = 0; i < 30; ++i) idea += "word ";
  const json c = {{"id", "c1"},
                  {"question", "How can we do better?"},
                  {"abstract", "A golden abstract."},
                  {"idea", idea}};
  char* result = nullptr;
  ASSERT_EQ(igr_judge_run(j, b, c.dump().c_str(), &result), IGR_OK) << igr_last_error();
  const json r = json::parse(Take(result));
  EXPECT_EQ(r["verdict"]["reward"], 1);
  EXPECT_EQ(r["backend_calls"], 5);
  igr_judge_free(j);
  igr_backend_free(b);

  EXPECT_EQ(igr_backend_create(R"({"kind":"carrier-pigeon"})", &b), IGR_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(igr_backend_create("{", &b), IGR_ERR_INVALID_ARGUMENT);
}

TEST(CApiTest, ParseEvaluatorOutput) {
  char* v = nullptr;
  ASSERT_EQ(igr_parse_evaluator_output(kEvaluatorMatch, &v), IGR_OK);
  EXPECT_EQ(json::parse(Take(v))["matched"], true);
  EXPECT_EQ(igr_parse_evaluator_output("no block here", &v), IGR_ERR_NO_JSON_BLOCK);
}

TEST(CApiTest, TrainerSteps) {
  const json cfg = {{"seed", 1},
                    {"task", {{"target", {3, 7}}}},
                    {"grpo", {{"learning_rate", 0.05}, {"batch_size", 2}}}};
  igr_trainer* t = nullptr;
  ASSERT_EQ(igr_trainer_create(cfg.dump().c_str(), 3, &t), IGR_OK) << igr_last_error();
  for (int s = 1; s <= 3; ++s) {
    char* stats = nullptr;
    ASSERT_EQ(igr_trainer_step(t, &stats), IGR_OK);
    const json st = json::parse(Take(stats));
    EXPECT_EQ(st["step"], s - 1);
    EXPECT_EQ(st["kl_coefficient"], 0.0);
  }
  igr_policy* p = nullptr;
  ASSERT_EQ(igr_trainer_policy(t, &p), IGR_OK);
  igr_policy_free(p);
  igr_trainer_free(t);
  const json beta = {{"grpo", {{"kl_coefficient", 0.1}}}};
  EXPECT_EQ(igr_trainer_create(beta.dump().c_str(), 3, &t), IGR_ERR_INVALID_ARGUMENT);
}

TEST(CApiTest, MetricsAndNormalization) {
  std::vector<int> pred(177, 0), labels(177, 0);
  for (int i = 0; i < 3; ++i) pred[i] = labels[i] = 1;
  for (int i = 3; i < 10; ++i) labels[i] = 1;
  char* rep = nullptr;
  ASSERT_EQ(igr_compute_metrics(pred.data(), labels.data(), 177, &rep), IGR_OK);
  const json m = json::parse(Take(rep));
  EXPECT_EQ(m["tp"], 3);
  EXPECT_EQ(m["fn"], 7);
  EXPECT_NEAR(m["recall"].get<double>(), 0.3, 1e-12);
  const double raw[] = {4, 0, -4};
  double out[3];
  ASSERT_EQ(igr_normalize_scores(raw, 3, out), IGR_OK);
  EXPECT_EQ(out[0], 5.0);
  EXPECT_EQ(out[1], 3.0);
  EXPECT_EQ(out[2], 1.0);
  EXPECT_EQ(igr_compute_metrics(pred.data(), labels.data(), 0, &rep), IGR_ERR_EMPTY_INPUT);
}

TEST(CApiTest, CommandRun) {
  int code = -1;
  char* out = nullptr;
  char* err = nullptr;
  ASSERT_EQ(igr_command_run(R"({"command":"fly"})", &code, &out, &err), IGR_OK);
  EXPECT_EQ(code, 2);
  Take(out);
  EXPECT_FALSE(Take(err).empty());
  const std::string dir = std::string(IGR_TEST_TMP) + "/c_api_prompts";
  const json cmd = {{"command", "prompts"}, {"out", dir}};
  ASSERT_EQ(igr_command_run(cmd.dump().c_str(), &code, &out, &err), IGR_OK);
  EXPECT_EQ(code, 0);
  Take(out);
  Take(err);
  EXPECT_TRUE(std::filesystem::exists(dir + "/evaluator.user.txt"));
}

}  // namespace
