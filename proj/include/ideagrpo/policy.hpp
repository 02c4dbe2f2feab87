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

#ifndef IDEAGRPO_POLICY_HPP_
#define IDEAGRPO_POLICY_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ideagrpo/domain.hpp"

namespace ideagrpo {

// A k-gram categorical policy: the next-token distribution is
// softmax(logits[row] / temperature), where row encodes the previous
// context_order tokens (left-padded with BOS).
struct PolicyParams {
  int vocab_size = 0;
  int context_order = 2;
  int bos = 0;
  int eos = 1;
  std::uint64_t init_seed = 0;
  // Optional surface form per token, used to decode rollouts to text.
  std::vector<std::string> token_text;
  // Row-major, shape (vocab_size^context_order, vocab_size).
  std::vector<double> logits;

  std::size_t num_rows() const;
  std::size_t num_params() const { return logits.size(); }
  std::span<double> row(std::size_t r);
  std::span<const double> row(std::size_t r) const;

  // Zero logits plus optional N(0, init_std^2) noise drawn from init_seed.
  static PolicyParams Create(int vocab_size, int context_order, int bos, int eos,
                             std::uint64_t init_seed = 0, double init_std = 0.0);

  // Throws kInvalidArgument when any invariant is broken.
  void Validate() const;
};

struct SamplingParams {
  double temperature = 1.0;
  int max_len = 32;
  int group_size = 8;
  std::uint64_t seed = 0;
  // Deterministic argmax decoding (the temperature -> 0 limit).
  bool greedy = false;

  void Validate() const;
};

// One (context row, emitted token, weight) contribution to a weighted sum of
// log-probabilities.
struct TokenTerm {
  std::size_t row = 0;
  int token = 0;
  double weight = 0.0;
};

// Context row used to predict each of `tokens`, given `prompt`.
std::vector<std::size_t> ContextRows(const PolicyParams& params, std::span<const int> prompt,
                                     std::span<const int> tokens);

// log softmax(row / temperature) written into `out` (same length as row).
void LogSoftmax(std::span<const double> row, double temperature, std::span<double> out);

// Samples sp.group_size rollouts; rewards are left empty.
RolloutGroup SampleGroup(const PolicyParams& params, std::span<const int> prompt,
                         const SamplingParams& sp);

std::vector<double> SequenceLogprobs(const PolicyParams& params, const Rollout& rollout,
                                     std::span<const int> prompt, double temperature);

// Exact d/d(logits) of sum_k weight_k * log pi(token_k | row_k).
std::vector<double> LogprobGrad(const PolicyParams& params, std::span<const TokenTerm> terms,
                                double temperature);

// Space-joined token_text (or "t<idx>"), EOS omitted.
std::string DecodeTokens(const PolicyParams& params, std::span<const int> tokens);

Json PolicyToJson(const PolicyParams& params);
PolicyParams PolicyFromJson(const Json& j);
void SavePolicy(const PolicyParams& params, const std::string& path);
PolicyParams LoadPolicy(const std::string& path);

// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t MixSeed(std::uint64_t a, std::uint64_t b);

}  // namespace ideagrpo

#endif  // IDEAGRPO_POLICY_HPP_
