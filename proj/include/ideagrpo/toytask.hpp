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

#ifndef IDEAGRPO_TOYTASK_HPP_
#define IDEAGRPO_TOYTASK_HPP_

#include <span>
#include <string>
#include <vector>

#include "ideagrpo/domain.hpp"
#include "ideagrpo/grpo.hpp"

namespace ideagrpo {

// "Emit the target" task used to exercise the optimizer end to end: a
// rollout earns reward 1 iff its tokens (EOS excluded) contain `target` as an
// ordered, not necessarily contiguous, subsequence.
struct TargetSubsequenceTask {
  std::vector<int> target;
  int eos = 0;

  bool Matches(std::span<const int> tokens) const;
  RewardFn MakeReward() const;
};

// n synthetic examples "toy-0".."toy-{n-1}" whose prompt is the single token
// (index mod prompt_tokens).
std::vector<TrainingExample> ToyCorpus(int n);
PromptFn ToyPromptFn(int prompt_tokens);

// The "task" section of a run config.
struct ToyTaskConfig {
  int vocab_size = 16;
  int context_order = 2;
  int bos = 14;
  int eos = 15;
  std::vector<int> target = {3, 7, 11};
  int prompt_tokens = 1;
  int corpus_size = 8;
  double init_std = 0.0;
  std::vector<std::string> token_text;

  PolicyParams MakePolicy(std::uint64_t seed) const;
};

// Missing keys keep their defaults.
void from_json(const Json& j, ToyTaskConfig& t);

}  // namespace ideagrpo

#endif  // IDEAGRPO_TOYTASK_HPP_
