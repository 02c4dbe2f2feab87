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

#include "ideagrpo/policy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include "ideagrpo/error.hpp"

namespace ideagrpo {

namespace {

constexpr int kCheckpointVersion = 1;

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double NextUnit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void CheckToken(const PolicyParams& params, int t, const char* what) {
  if (t < 0 || t >= params.vocab_size) {
    throw Error(ErrorCode::kInvalidToken, std::string(what) + " token " + std::to_string(t) +
                                              " outside vocabulary of size " +
                                              std::to_string(params.vocab_size));
  }
}

std::size_t RowIndex(const PolicyParams& params, std::span<const int> window) {
  std::size_t r = 0;
  for (int t : window) r = r * static_cast<std::size_t>(params.vocab_size) + t;
  return r;
}

}  // namespace

std::uint64_t MixSeed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::size_t PolicyParams::num_rows() const {
  std::size_t rows = 1;
  for (int i = 0; i < context_order; ++i) rows *= static_cast<std::size_t>(vocab_size);
  return rows;
}

std::span<double> PolicyParams::row(std::size_t r) {
  return std::span<double>(logits).subspan(r * vocab_size, vocab_size);
}

std::span<const double> PolicyParams::row(std::size_t r) const {
  return std::span<const double>(logits).subspan(r * vocab_size, vocab_size);
}

PolicyParams PolicyParams::Create(int vocab_size, int context_order, int bos, int eos,
                                  std::uint64_t init_seed, double init_std) {
  PolicyParams p;
  p.vocab_size = vocab_size;
  p.context_order = context_order;
  p.bos = bos;
  p.eos = eos;
  p.init_seed = init_seed;
  if (vocab_size < 2 || context_order < 1) p.Validate();
  p.logits.assign(p.num_rows() * vocab_size, 0.0);
  if (init_std > 0.0) {
    std::mt19937_64 rng(init_seed);
    // Box-Muller on NextUnit keeps the draw platform independent.
    for (std::size_t i = 0; i < p.logits.size(); i += 2) {
      const double u1 = 1.0 - NextUnit(rng);
      const double u2 = NextUnit(rng);
      const double mag = init_std * std::sqrt(-2.0 * std::log(u1));
      p.logits[i] = mag * std::cos(2.0 * M_PI * u2);
      if (i + 1 < p.logits.size()) p.logits[i + 1] = mag * std::sin(2.0 * M_PI * u2);
    }
  }
  p.Validate();
  return p;
}

void PolicyParams::Validate() const {
  if (vocab_size < 2) throw Error(ErrorCode::kInvalidArgument, "vocab_size must be >= 2");
  if (context_order < 1) throw Error(ErrorCode::kInvalidArgument, "context_order must be >= 1");
  if (bos == eos) throw Error(ErrorCode::kInvalidArgument, "BOS and EOS must differ");
  if (bos < 0 || bos >= vocab_size || eos < 0 || eos >= vocab_size) {
    throw Error(ErrorCode::kInvalidArgument, "BOS/EOS outside vocabulary");
  }
  if (logits.size() != num_rows() * static_cast<std::size_t>(vocab_size)) {
    throw Error(ErrorCode::kInvalidArgument, "logits table has the wrong shape");
  }
  for (double v : logits) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "non-finite logit");
  }
  if (!token_text.empty() && token_text.size() != static_cast<std::size_t>(vocab_size)) {
    throw Error(ErrorCode::kInvalidArgument, "token_text size must equal vocab_size");
  }
}

void SamplingParams::Validate() const {
  if (!(temperature > 0.0)) throw Error(ErrorCode::kInvalidArgument, "temperature must be > 0");
  if (max_len < 1) throw Error(ErrorCode::kInvalidArgument, "max_len must be >= 1");
  if (group_size < 2) throw Error(ErrorCode::kInvalidArgument, "group_size must be >= 2");
}

void LogSoftmax(std::span<const double> row, double temperature, std::span<double> out) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : row) mx = std::max(mx, v / temperature);
  double sum = 0.0;
  for (double v : row) sum += std::exp(v / temperature - mx);
  const double log_z = mx + std::log(sum);
  for (std::size_t i = 0; i < row.size(); ++i) out[i] = row[i] / temperature - log_z;
}

std::vector<std::size_t> ContextRows(const PolicyParams& params, std::span<const int> prompt,
                                     std::span<const int> tokens) {
  const std::size_t k = params.context_order;
  std::vector<int> history(k, params.bos);
  history.reserve(k + prompt.size() + tokens.size());
  for (int t : prompt) {
    CheckToken(params, t, "prompt");
    history.push_back(t);
  }
  std::vector<std::size_t> rows;
  rows.reserve(tokens.size());
  for (int t : tokens) {
    CheckToken(params, t, "rollout");
    rows.push_back(RowIndex(params, std::span<const int>(history).last(k)));
    history.push_back(t);
  }
  return rows;
}

RolloutGroup SampleGroup(const PolicyParams& params, std::span<const int> prompt,
                         const SamplingParams& sp) {
  sp.Validate();
  for (int t : prompt) CheckToken(params, t, "prompt");
  const std::size_t k = params.context_order;
  std::mt19937_64 rng(sp.seed);
  std::vector<double> logp(params.vocab_size);

  RolloutGroup group;
  group.rollouts.reserve(sp.group_size);
  for (int g = 0; g < sp.group_size; ++g) {
    std::vector<int> history(k, params.bos);
    history.insert(history.end(), prompt.begin(), prompt.end());
    Rollout r;
    for (int step = 0; step < sp.max_len; ++step) {
      const std::size_t row = RowIndex(params, std::span<const int>(history).last(k));
      LogSoftmax(params.row(row), sp.temperature, logp);
      int token = 0;
      if (sp.greedy) {
        token = static_cast<int>(std::max_element(logp.begin(), logp.end()) - logp.begin());
      } else {
        const double u = NextUnit(rng);
        double acc = 0.0;
        token = params.vocab_size - 1;
        for (int v = 0; v < params.vocab_size; ++v) {
          acc += std::exp(logp[v]);
          if (u < acc) {
            token = v;
            break;
          }
        }
      }
      r.tokens.push_back(token);
      r.behavior_logprobs.push_back(logp[token]);
      history.push_back(token);
      if (token == params.eos) break;
    }
    r.text = DecodeTokens(params, r.tokens);
    group.rollouts.push_back(std::move(r));
  }
  return group;
}

std::vector<double> SequenceLogprobs(const PolicyParams& params, const Rollout& rollout,
                                     std::span<const int> prompt, double temperature) {
  if (!(temperature > 0.0)) throw Error(ErrorCode::kInvalidArgument, "temperature must be > 0");
  const auto rows = ContextRows(params, prompt, rollout.tokens);
  std::vector<double> logp(params.vocab_size);
  std::vector<double> out;
  out.reserve(rows.size());
  for (std::size_t t = 0; t < rows.size(); ++t) {
    LogSoftmax(params.row(rows[t]), temperature, logp);
    out.push_back(logp[rollout.tokens[t]]);
  }
  return out;
}

std::vector<double> LogprobGrad(const PolicyParams& params, std::span<const TokenTerm> terms,
                                double temperature) {
  std::vector<double> grad(params.logits.size(), 0.0);
  std::vector<double> logp(params.vocab_size);
  for (const TokenTerm& term : terms) {
    if (term.weight == 0.0) continue;
    CheckToken(params, term.token, "term");
    LogSoftmax(params.row(term.row), temperature, logp);
    double* g = grad.data() + term.row * params.vocab_size;
    const double scale = term.weight / temperature;
    for (int v = 0; v < params.vocab_size; ++v) g[v] -= scale * std::exp(logp[v]);
    g[term.token] += scale;
  }
  return grad;
}

std::string DecodeTokens(const PolicyParams& params, std::span<const int> tokens) {
  std::string out;
  for (int t : tokens) {
    if (t == params.eos) continue;
    if (!out.empty()) out += ' ';
    if (!params.token_text.empty()) {
      out += params.token_text[t];
    } else {
      out += 't' + std::to_string(t);
    }
  }
  return out;
}

Json PolicyToJson(const PolicyParams& params) {
  return Json{{"format", "ideagrpo.policy"},
              {"version", kCheckpointVersion},
              {"vocab_size", params.vocab_size},
              {"context_order", params.context_order},
              {"bos", params.bos},
              {"eos", params.eos},
              {"init_seed", params.init_seed},
              {"token_text", params.token_text},
              {"logits", params.logits}};
}

PolicyParams PolicyFromJson(const Json& j) {
  if (j.value("format", std::string()) != "ideagrpo.policy") {
    throw Error(ErrorCode::kMalformed, "not a policy checkpoint");
  }
  if (j.value("version", 0) != kCheckpointVersion) {
    throw Error(ErrorCode::kMalformed,
                "unsupported checkpoint version " + j.value("version", Json()).dump());
  }
  PolicyParams p;
  p.vocab_size = j.at("vocab_size").get<int>();
  p.context_order = j.at("context_order").get<int>();
  p.bos = j.at("bos").get<int>();
  p.eos = j.at("eos").get<int>();
  p.init_seed = j.value("init_seed", std::uint64_t{0});
  p.token_text = j.value("token_text", std::vector<std::string>{});
  p.logits = j.at("logits").get<std::vector<double>>();
  p.Validate();
  return p;
}

void SavePolicy(const PolicyParams& params, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << PolicyToJson(params).dump() << '\n';
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

PolicyParams LoadPolicy(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kMalformed, path + ": " + e.what());
  }
  return PolicyFromJson(j);
}

}  // namespace ideagrpo
