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

#include "ideagrpo/toytask.hpp"

#include <cstdint>
#include <string>

#include "ideagrpo/error.hpp"

namespace ideagrpo {

namespace {

std::uint64_t Fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

bool TargetSubsequenceTask::Matches(std::span<const int> tokens) const {
  if (target.empty()) return true;
  std::size_t next = 0;
  for (int t : tokens) {
    if (t == eos) break;
    if (t == target[next] && ++next == target.size()) return true;
  }
  return false;
}

RewardFn TargetSubsequenceTask::MakeReward() const {
  TargetSubsequenceTask task = *this;
  return [task](const TrainingExample&, const RolloutGroup& group) {
    std::vector<int> rewards;
    rewards.reserve(group.size());
    for (const Rollout& r : group.rollouts) rewards.push_back(task.Matches(r.tokens) ? 1 : 0);
    return rewards;
  };
}

std::vector<TrainingExample> ToyCorpus(int n) {
  std::vector<TrainingExample> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    TrainingExample ex;
    ex.question = {"toy-" + std::to_string(i), "emit the target sequence", Source::kSynthetic};
    ex.golden = {"toy-" + std::to_string(i), "the target sequence"};
    out.push_back(std::move(ex));
  }
  return out;
}

PromptFn ToyPromptFn(int prompt_tokens) {
  if (prompt_tokens < 1) throw Error(ErrorCode::kInvalidArgument, "prompt_tokens must be >= 1");
  return [prompt_tokens](const TrainingExample& ex) {
    // Examples are named toy-<n>; anything else hashes its id.
    std::uint64_t idx = Fnv1a(ex.question.id);
    if (ex.question.id.rfind("toy-", 0) == 0) idx = std::stoul(ex.question.id.substr(4));
    return std::vector<int>{static_cast<int>(idx % prompt_tokens)};
  };
}

PolicyParams ToyTaskConfig::MakePolicy(std::uint64_t seed) const {
  PolicyParams p = PolicyParams::Create(vocab_size, context_order, bos, eos, seed, init_std);
  p.token_text = token_text;
  p.Validate();
  for (int t : target) {
    if (t < 0 || t >= vocab_size || t == eos) {
      throw Error(ErrorCode::kInvalidToken, "target token " + std::to_string(t) + " is unusable");
    }
  }
  if (prompt_tokens < 1 || prompt_tokens > vocab_size) {
    throw Error(ErrorCode::kInvalidArgument, "prompt_tokens must be in [1, vocab_size]");
  }
  return p;
}

void from_json(const Json& j, ToyTaskConfig& t) {
  t.vocab_size = j.value("vocab_size", t.vocab_size);
  t.context_order = j.value("context_order", t.context_order);
  t.bos = j.value("bos", t.bos);
  t.eos = j.value("eos", t.eos);
  t.target = j.value("target", t.target);
  t.prompt_tokens = j.value("prompt_tokens", t.prompt_tokens);
  t.corpus_size = j.value("corpus_size", t.corpus_size);
  t.init_std = j.value("init_std", t.init_std);
  t.token_text = j.value("token_text", t.token_text);
}

}  // namespace ideagrpo
