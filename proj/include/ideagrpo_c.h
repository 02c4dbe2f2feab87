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


/* C interface to the ideagrpo library. Every function returns an igr_status;
 * on failure igr_last_error() describes the most recent error on the calling
 * thread. Strings returned through char** out-parameters are owned by the
 * caller and released with igr_string_free. */

#ifndef IDEAGRPO_C_H_
#define IDEAGRPO_C_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define IGR_API __declspec(dllexport)
#else
#define IGR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum igr_status {
  IGR_OK = 0,
  IGR_ERR_INVALID_ARGUMENT = 1,
  IGR_ERR_SIZE_MISMATCH = 2,
  IGR_ERR_NON_BINARY_REWARD = 3,
  IGR_ERR_EMPTY_GROUP = 4,
  IGR_ERR_INVALID_TOKEN = 5,
  IGR_ERR_DEGENERATE_GROUP = 6,
  IGR_ERR_ZERO_LENGTH = 7,
  IGR_ERR_LENGTH_MISMATCH = 8,
  IGR_ERR_TRANSPORT = 9,
  IGR_ERR_RATE_LIMITED = 10,
  IGR_ERR_PLAYBOOK_MISS = 11,
  IGR_ERR_AUTH_MISSING = 12,
  IGR_ERR_CACHE_MISS = 13,
  IGR_ERR_MISSING_SLOT = 14,
  IGR_ERR_NO_JSON_BLOCK = 15,
  IGR_ERR_MISSING_KEY = 16,
  IGR_ERR_TYPE_ERROR = 17,
  IGR_ERR_PARSE_FAILURE = 18,
  IGR_ERR_EMPTY_INPUT = 19,
  IGR_ERR_MALFORMED = 20,
  IGR_ERR_DUPLICATE_ID = 21,
  IGR_ERR_INSUFFICIENT_CORPUS = 22,
  IGR_ERR_IO = 23,
  IGR_ERR_INTERNAL = 100
} igr_status;

typedef enum igr_advantage_mode {
  IGR_ADVANTAGE_MEAN_SUBTRACT = 0,
  IGR_ADVANTAGE_STANDARDIZED = 1
} igr_advantage_mode;

typedef struct igr_policy igr_policy;
typedef struct igr_backend igr_backend;
typedef struct igr_judge igr_judge;
typedef struct igr_trainer igr_trainer;

IGR_API const char* igr_version(void);
IGR_API const char* igr_status_name(igr_status status);
IGR_API const char* igr_last_error(void);
IGR_API void igr_string_free(char* s);

/* ---- policy ---- */

IGR_API igr_status igr_policy_create(int vocab_size, int context_order, int bos, int eos,
                                     uint64_t init_seed, double init_std, igr_policy** out);
IGR_API igr_status igr_policy_load(const char* path, igr_policy** out);
IGR_API igr_status igr_policy_save(const igr_policy* policy, const char* path);
IGR_API void igr_policy_free(igr_policy* policy);
/* sampling_json: {"temperature", "max_len", "group_size", "seed", "greedy"}.
 * Writes the sampled RolloutGroup as JSON. */
IGR_API igr_status igr_policy_sample(const igr_policy* policy, const int* prompt,
                                     size_t prompt_len, const char* sampling_json,
                                     char** out_group_json);
/* Per-token log-probabilities of `tokens` after `prompt`; out has n_tokens
 * entries. */
IGR_API igr_status igr_policy_logprobs(const igr_policy* policy, const int* prompt,
                                       size_t prompt_len, const int* tokens, size_t n_tokens,
                                       double temperature, double* out);

/* ---- optimizer arithmetic ---- */

IGR_API igr_status igr_sequence_advantages(const int* rewards, size_t group_size,
                                           igr_advantage_mode mode, double* out);
IGR_API igr_status igr_length_weights(const size_t* lengths, size_t group_size, double* out);
IGR_API igr_status igr_cosine_lr(long step, long total_steps, double base_lr, double* out);
/* Single-sequence-per-row clipped objective over flat token arrays. */
IGR_API igr_status igr_clipped_objective(const double* ratios, const double* token_advantages,
                                         size_t n_tokens, double epsilon, size_t group_size,
                                         double* out_objective, double* out_clip_fraction);

/* ---- backends and judge ---- */

/* spec_json: {"kind": "http"|"scripted"|"replay", ...}. */
IGR_API igr_status igr_backend_create(const char* spec_json, igr_backend** out);
IGR_API void igr_backend_free(igr_backend* backend);
/* request_json: {"messages": [{"role", "content"}], "temperature", "max_tokens",
 * "model", "route": {"scope", "role", "round", "agent_index", "attempt"}}. */
IGR_API igr_status igr_backend_complete(igr_backend* backend, const char* request_json,
                                        char** out_text);

/* judge_json: {"strategy", "arch": name|object, "options": {...},
 * "prompts_dir"}; NULL or "{}" gives the default two-analyst judge. */
IGR_API igr_status igr_judge_create(const char* judge_json, igr_judge** out);
IGR_API void igr_judge_free(igr_judge* judge);
/* Writes {"verdict": {...}, "transcript": {...}, "backend_calls": n}. */
IGR_API igr_status igr_judge_run(const igr_judge* judge, igr_backend* backend,
                                 const char* case_json, char** out_result_json);
IGR_API igr_status igr_parse_evaluator_output(const char* text, char** out_verdict_json);

/* ---- training ---- */

/* config_json uses the run-config "grpo", "task" and "seed" sections and
 * trains on the target-subsequence toy task. */
IGR_API igr_status igr_trainer_create(const char* config_json, long total_steps,
                                      igr_trainer** out);
IGR_API void igr_trainer_free(igr_trainer* trainer);
IGR_API igr_status igr_trainer_step(igr_trainer* trainer, char** out_stats_json);
IGR_API igr_status igr_trainer_policy(const igr_trainer* trainer, igr_policy** out_copy);

/* ---- evaluation ---- */

IGR_API igr_status igr_compute_metrics(const int* predicted, const int* labels, size_t n,
                                       char** out_report_json);
IGR_API igr_status igr_normalize_scores(const double* raw, size_t n, double* out);

/* ---- commands ---- */

/* Runs an operator command (see the CLI) described as JSON. exit_code
 * receives 0, 1 or 2; out_stdout and out_stderr receive the text the
 * command produced. Returns IGR_OK whenever the command ran, whatever its
 * exit code. */
IGR_API igr_status igr_command_run(const char* command_json, int* exit_code, char** out_stdout,
                                   char** out_stderr);

#ifdef __cplusplus
}
#endif

#endif /* IDEAGRPO_C_H_ */
