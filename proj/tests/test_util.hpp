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

#ifndef IDEAGRPO_TESTS_TEST_UTIL_HPP_
#define IDEAGRPO_TESTS_TEST_UTIL_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ideagrpo/evalharness.hpp"
#include "ideagrpo/grpo.hpp"
#include "ideagrpo/judge.hpp"
#include "ideagrpo/policy.hpp"

namespace ideagrpo::testing {

// Off-policy groups: behavior logprobs are the current ones plus noise, so
// some ratios leave the trust region and clipping engages. Tokens whose
// ratio lies within `margin` of a clip boundary are nudged away from it, so
// the step loss is differentiable at `params`.
inline std::vector<ScoredGroup> RandomScoredGroups(const PolicyParams& params,
                                                   const GrpoConfig& cfg, std::uint64_t seed,
                                                   int num_groups, double margin = 1e-3) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.25);
  std::vector<ScoredGroup> out;
  for (int g = 0; g < num_groups; ++g) {
    ScoredGroup sg;
    sg.prompt = {static_cast<int>(rng() % params.vocab_size)};
    SamplingParams sp;
    sp.group_size = cfg.group_size;
    sp.max_len = cfg.max_len;
    sp.temperature = cfg.temperature;
    sp.seed = rng();
    sg.group = SampleGroup(params, sg.prompt, sp);
    for (std::size_t i = 0; i < sg.group.size(); ++i) {
      sg.group.rewards.push_back(static_cast<int>(rng() % 2));
    }
    for (Rollout& r : sg.group.rollouts) {
      for (double& lp : r.behavior_logprobs) lp = std::min(lp + noise(rng), -1e-3);
    }
    for (Rollout& r : sg.group.rollouts) {
      const auto cur = SequenceLogprobs(params, r, sg.prompt, cfg.temperature);
      for (std::size_t t = 0; t < cur.size(); ++t) {
        for (double edge : {1.0 - cfg.epsilon, 1.0 + cfg.epsilon}) {
          const double rho = std::exp(cur[t] - r.behavior_logprobs[t]);
          if (std::abs(rho - edge) < margin) r.behavior_logprobs[t] -= 10 * margin;
        }
      }
    }
    out.push_back(std::move(sg));
  }
  return out;
}

// Relative L2 error between the analytic step-loss gradient and central
// finite differences with step h.
inline double StepLossFdError(PolicyParams params, const std::vector<ScoredGroup>& groups,
                              const GrpoConfig& cfg, double h = 1e-5) {
  const auto grad = StepLoss(params, groups, cfg).grad;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < params.logits.size(); ++i) {
    const double saved = params.logits[i];
    params.logits[i] = saved + h;
    const double up = StepLoss(params, groups, cfg, false).loss;
    params.logits[i] = saved - h;
    const double down = StepLoss(params, groups, cfg, false).loss;
    params.logits[i] = saved;
    const double fd = (up - down) / (2 * h);
    num += (fd - grad[i]) * (fd - grad[i]);
    den += fd * fd + grad[i] * grad[i];
  }
  return den == 0.0 ? 0.0 : std::sqrt(num / den);
}


inline std::string EvaluatorOutput(bool match, int reward, const std::string& reason = "ok") {
  return "<summarization>s</summarization>\n<reasoning>r</reasoning>\n```json\n" +
         Json{{"reason", reason}, {"match", match}, {"reward", reward}}.dump() + "\n```";
}

// A concrete idea long enough to pass the placeholder guard.
inline JudgeCase SampleCase(std::string id = "case-1") {
  JudgeCase jc;
  jc.id = std::move(id);
  jc.question = {"q1", "How can sparse attention scale to long documents?", Source::kGolden};
  jc.golden = {"p1", "We route tokens to learned clusters and attend within clusters."};
  jc.idea =
      "Cluster token keys online with a streaming k-means step, then restrict each query to "
      "attend to keys from its two nearest clusters, trained end to end with a balancing loss.";
  return jc;
}

// Agents answer with their role name; the evaluator returns `evaluator`.
inline Json DebatePlaybook(const std::string& evaluator) {
  return Json{{"moderator", "moderator turn"},
              {"analyst", "analyst turn"},
              {"critic", "critic turn"},
              {"evaluator", evaluator}};
}

// Evaluator outputs that break the verdict contract in one of several ways.
// None may yield reward 1. Mutation 0 is the only parseable one (match false
// with reward 1, which coerces to 0).
inline constexpr int kCorruptionKinds = 14;

inline std::string CorruptEvaluatorOutput(std::mt19937_64& rng, int* kind_out = nullptr) {
  static const std::string kAlphabet = "abcdefghij klmnopqrstuvwxyz.,;:!?-";
  auto prose = [&](std::size_t n) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += kAlphabet[rng() % kAlphabet.size()];
    return s;
  };
  const std::string reason = prose(5 + rng() % 40);
  const int kind = static_cast<int>(rng() % kCorruptionKinds);
  if (kind_out != nullptr) *kind_out = kind;
  Json obj{{"reason", reason}, {"match", true}, {"reward", 1}};
  std::string body;
  bool fenced = true;
  switch (kind) {
    case 0: obj["match"] = false; break;
    case 1: fenced = false; break;
    case 2: body = obj.dump().substr(0, obj.dump().size() - 1 - rng() % 5); break;
    case 3: obj["match"] = "true"; break;
    case 4: obj["reward"] = 2; break;
    case 5: obj["reward"] = "1"; break;
    case 6: obj.erase(std::vector<std::string>{"reason", "match", "reward"}[rng() % 3]); break;
    case 7: obj["match"] = 1; break;
    case 8: body = Json::array({obj}).dump(); break;
    case 9: body = ""; fenced = rng() % 2 == 0; break;
    case 10: body = "{'reason': '" + reason + "', 'match': True, 'reward': 1}"; break;
    case 11: obj["reason"] = 42; break;
    case 12: obj["reward"] = 0.5; break;
    case 13: obj["match"] = nullptr; break;
  }
  if (body.empty() && kind != 9) body = obj.dump(static_cast<int>(rng() % 3) - 1);
  std::string out = prose(rng() % 30) + "\n";
  if (fenced) {
    out += (rng() % 2 == 0 ? "```json\n" : "```\n") + body + "\n```";
  } else {
    out += body;
  }
  return out + "\n" + prose(rng() % 30);
}

// Deterministic stand-in for a pairwise judge: the verdict for criterion c
// when `first` is shown before `second` is a fixed hash of the four ids, so
// position effects are present and order-swapping matters.
inline Outcome PairwisePreference(const std::string& qid, Criterion c, const std::string& first,
                                  const std::string& second) {
  const std::size_t h = std::hash<std::string>{}(qid + "|" + std::string(ToString(c)) + "|" +
                                                 first + "|" + second);
  return static_cast<Outcome>(h % 3);
}

inline std::vector<PairwiseQuestion> PairwiseFixture(int num_methods, int num_questions) {
  std::vector<PairwiseQuestion> out;
  for (int q = 0; q < num_questions; ++q) {
    PairwiseQuestion pq;
    pq.question = {"q" + std::to_string(q), "Question number " + std::to_string(q) + "?",
                   Source::kGolden};
    for (int m = 0; m < num_methods; ++m) {
      const std::string id = "method" + std::to_string(m);
      pq.ideas[id] = "IDEA<" + id + "@" + pq.question.id + "> detailed plan.";
    }
    out.push_back(std::move(pq));
  }
  return out;
}

// Reads which ideas were shown as A and B and answers per PairwisePreference.
inline ScriptedBackend::Responder PairwiseResponder(std::vector<PairwiseQuestion> questions) {
  return [questions = std::move(questions)](
             const CompletionRequest& req) -> std::optional<std::string> {
    const std::string& prompt = req.messages.back().content;
    for (const PairwiseQuestion& q : questions) {
      if (q.question.id != req.route.scope) continue;
      std::vector<std::pair<std::size_t, std::string>> shown;
      for (const auto& [m, idea] : q.ideas) {
        if (auto pos = prompt.find(idea); pos != std::string::npos) shown.emplace_back(pos, m);
      }
      if (shown.size() != 2) return std::nullopt;
      std::sort(shown.begin(), shown.end());
      Json verdict;
      for (Criterion c : kCriteria) {
        const Outcome o = PairwisePreference(q.question.id, c, shown[0].second, shown[1].second);
        verdict[std::string(ToString(c))] =
            o == Outcome::kFirst ? "A" : o == Outcome::kSecond ? "B" : "equal";
      }
      return "Comparison done.\n" + verdict.dump();
    }
    return std::nullopt;
  };
}

// Independent enumeration: every ordered pair of distinct methods per question.
inline std::map<Criterion, std::map<std::string, double>> BruteForceNetScores(
    const std::vector<PairwiseQuestion>& questions) {
  std::map<Criterion, std::map<std::string, double>> net;
  for (const PairwiseQuestion& q : questions) {
    for (const auto& [x, _] : q.ideas) {
      for (const auto& [y, __] : q.ideas) {
        if (x == y) continue;
        for (Criterion c : kCriteria) {
          net[c][x] += 0.0;
          net[c][y] += 0.0;
          switch (PairwisePreference(q.question.id, c, x, y)) {
            case Outcome::kFirst: net[c][x] += 1; net[c][y] -= 1; break;
            case Outcome::kSecond: net[c][y] += 1; net[c][x] -= 1; break;
            case Outcome::kEqual: break;
          }
        }
      }
    }
  }
  return net;
}

// n synthetic ICLR-style records with distinct ids and scores.
inline std::vector<TrainingExample> FixtureCorpus(int n) {
  std::vector<TrainingExample> out;
  for (int i = 0; i < n; ++i) {
    TrainingExample ex;
    ex.question = {"paper-" + std::to_string(i), "How can method " + std::to_string(i) + " work?",
                   Source::kIclr2024};
    ex.golden = {"paper-" + std::to_string(i), "Abstract of paper " + std::to_string(i) + "."};
    ex.score = 1.0 + (i * 37 % 100) / 10.0;
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace ideagrpo::testing

#endif  // IDEAGRPO_TESTS_TEST_UTIL_HPP_
