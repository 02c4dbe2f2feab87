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

#include "ideagrpo/judge.hpp"

#include <regex>

#include "ideagrpo/jsonext.hpp"
#include "ideagrpo/parallel.hpp"

namespace ideagrpo {

namespace {

JudgeArchitecture Arch(std::string name, bool m, int a, int c, bool e) {
  JudgeArchitecture arch;
  arch.name = std::move(name);
  arch.moderator = m;
  arch.analysts = a;
  arch.critics = c;
  arch.evaluator = e;
  arch.rounds = 2;
  return arch;
}

bool IsParseError(ErrorCode code) {
  return code == ErrorCode::kNoJsonBlock || code == ErrorCode::kMissingKey ||
         code == ErrorCode::kTypeError || code == ErrorCode::kParseFailure;
}

std::optional<std::string> HaltPhrase(std::string_view content,
                                      const std::vector<std::string>& phrases) {
  if (phrases.empty()) return std::nullopt;
  const std::string lower = ToLower(content);
  for (const std::string& p : phrases) {
    if (!p.empty() && lower.find(ToLower(p)) != std::string::npos) return p;
  }
  return std::nullopt;
}

}  // namespace

void JudgeArchitecture::Validate() const {
  if (analysts < 0 || critics < 0) {
    throw Error(ErrorCode::kInvalidArgument, "agent counts must be non-negative");
  }
  if (analysts + critics + (evaluator ? 1 : 0) < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "architecture needs at least one analyst, critic or evaluator");
  }
  if (rounds < 1) throw Error(ErrorCode::kInvalidArgument, "rounds must be >= 1");
}

int JudgeArchitecture::ScheduledTurns() const {
  return rounds * ((moderator ? 1 : 0) + analysts + critics) + (evaluator ? 1 : 0);
}

JudgeArchitecture NamedArchitecture(std::string_view name) {
  if (name == "ordinary") return Arch("ordinary", true, 1, 1, true);
  if (name == "no-moderator") return Arch("no-moderator", false, 1, 1, true);
  if (name == "no-analyst") return Arch("no-analyst", true, 0, 1, true);
  if (name == "no-critic") return Arch("no-critic", true, 1, 0, true);
  if (name == "no-evaluator") return Arch("no-evaluator", true, 1, 1, false);
  if (name == "ordinary+ca") return Arch("ordinary+ca", true, 2, 2, true);
  if (name.size() == 4 && name.substr(1) == "a1e" && name[0] >= '1' && name[0] <= '6') {
    return Arch(std::string(name), false, name[0] - '0', 0, true);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown architecture '" + std::string(name) + "'");
}

std::vector<std::string> ArchitectureNames() {
  return {"ordinary", "no-moderator", "no-analyst", "no-critic", "no-evaluator",
          "ordinary+ca", "1a1e", "2a1e", "3a1e", "4a1e", "5a1e", "6a1e"};
}

JudgeArchitecture ParseArchitecture(const Json& spec) {
  JudgeArchitecture arch;
  if (spec.is_string()) {
    arch = NamedArchitecture(spec.get<std::string>());
  } else if (spec.is_object()) {
    arch = spec.get<JudgeArchitecture>();
  } else {
    throw Error(ErrorCode::kInvalidArgument, "architecture must be a name or an object");
  }
  arch.Validate();
  return arch;
}

void to_json(Json& j, const JudgeArchitecture& a) {
  j = Json{{"name", a.name},         {"moderator", a.moderator}, {"analysts", a.analysts},
           {"critics", a.critics},   {"evaluator", a.evaluator}, {"rounds", a.rounds}};
}

void from_json(const Json& j, JudgeArchitecture& a) {
  if (!j.is_object()) throw Error(ErrorCode::kTypeError, "architecture must be an object");
  if (j.contains("base")) a = NamedArchitecture(j.at("base").get<std::string>());
  a.name = j.value("name", a.name.empty() ? std::string("custom") : a.name);
  a.moderator = j.value("moderator", a.moderator);
  a.analysts = j.value("analysts", a.analysts);
  a.critics = j.value("critics", a.critics);
  a.evaluator = j.value("evaluator", a.evaluator);
  a.rounds = j.value("rounds", a.rounds);
}

void to_json(Json& j, const JudgeCase& c) {
  j = Json{{"id", c.id}, {"question", c.question}, {"golden", c.golden}, {"idea", c.idea}};
}

// Accepts the nested form written by to_json and the flat corpus form
// {id, question: "...", abstract: "...", idea}.
void from_json(const Json& j, JudgeCase& c) {
  if (!j.is_object()) throw Error(ErrorCode::kMalformed, "case must be a JSON object");
  c.id = j.value("id", std::string());
  const Json& q = RequireKey(j, "question");
  if (q.is_string()) {
    c.question = ResearchQuestion{c.id, q.get<std::string>(), Source::kSynthetic};
    c.golden = GoldenAbstract{j.value("paper_id", c.id), RequireStringKey(j, "abstract")};
  } else {
    c.question = q.get<ResearchQuestion>();
    c.golden = RequireKey(j, "golden").get<GoldenAbstract>();
  }
  if (c.id.empty()) c.id = c.question.id;
  c.idea = RequireStringKey(j, "idea");
}

std::vector<std::string> DefaultPlaceholderPatterns() {
  return {
      R"(\.\.\.\s*the\s+answer\s+part\s*\.\.\.)",
      R"(\[\s*(\.\.\.|…)\s*\])",
      R"(\(\s*(\.\.\.|…)\s*\))",
      R"(\{\s*(\.\.\.|…)\s*\})",
      R"(<\s*(\.\.\.|…)\s*>)",
      R"(\[\s*(insert|your|placeholder|todo|tbd|fill)[^\]]*\])",
      R"(<\s*(insert|your|placeholder|todo|tbd|fill)[^>]*>)",
      R"(\blorem\s+ipsum\b)",
  };
}

void to_json(Json& j, const JudgeOptions& o) {
  j = Json{{"evaluator_retries", o.evaluator_retries},
           {"temperature", o.temperature},
           {"max_tokens", o.max_tokens},
           {"model", o.model},
           {"placeholder_patterns", o.placeholder_patterns},
           {"min_words", o.min_words},
           {"halt_phrases", o.halt_phrases}};
}

void from_json(const Json& j, JudgeOptions& o) {
  o.evaluator_retries = j.value("evaluator_retries", o.evaluator_retries);
  o.temperature = j.value("temperature", o.temperature);
  o.max_tokens = j.value("max_tokens", o.max_tokens);
  o.model = j.value("model", o.model);
  o.placeholder_patterns = j.value("placeholder_patterns", o.placeholder_patterns);
  o.min_words = j.value("min_words", o.min_words);
  o.halt_phrases = j.value("halt_phrases", o.halt_phrases);
  if (o.evaluator_retries < 0) {
    throw Error(ErrorCode::kInvalidArgument, "evaluator_retries must be >= 0");
  }
}

bool DetectPlaceholder(std::string_view idea, const std::vector<std::string>& patterns,
                       std::size_t min_words) {
  if (WordCount(idea) < min_words) return true;
  const std::string text(idea);
  for (const std::string& p : patterns) {
    const std::regex re(p, std::regex::ECMAScript | std::regex::icase);
    if (std::regex_search(text, re)) return true;
  }
  return false;
}

std::string RenderHistory(const std::vector<DebateTurn>& turns) {
  std::string out;
  for (const DebateTurn& t : turns) {
    if (!out.empty()) out += "\n\n";
    out += "[Round " + std::to_string(t.round) + "][" + std::string(DisplayName(t.role)) + "#" +
           std::to_string(t.agent_index + 1) + "]: " + t.content;
  }
  return out;
}

std::vector<ChatMessage> RenderTurn(const PromptLibrary& prompts, Role role, int agent_index,
                                    int round, const std::vector<DebateTurn>& history,
                                    const JudgeCase& jc) {
  if (round < 1) throw Error(ErrorCode::kInvalidArgument, "round must be >= 1");
  if (agent_index < 0) throw Error(ErrorCode::kInvalidArgument, "agent_index must be >= 0");
  const std::string name(ToString(role));
  const PromptPair& pair = prompts.Get(name);
  const std::map<std::string, std::string> slots = {
      {"history", RenderHistory(history)},
      {"round_num", std::to_string(round)},
      {"rq", jc.question.text},
      {"abs", jc.golden.text},
      {"idea", jc.idea},
  };
  return {ChatMessage{ChatRole::kSystem, pair.system},
          ChatMessage{ChatRole::kUser, Render(pair.user, slots, RequiredSlots(name))}};
}

Verdict ParseEvaluatorOutput(std::string_view text) {
  Json obj;
  bool found = false;
  for (const std::string& block : FencedBlocks(text)) {
    Json j = Json::parse(Trim(block), nullptr, false);
    if (!j.is_discarded() && j.is_object()) {
      obj = std::move(j);
      found = true;
      break;
    }
  }
  if (!found) throw Error(ErrorCode::kNoJsonBlock, "no fenced JSON object in evaluator output");

  Verdict v;
  v.summarization = TagBody(text, "summarization");
  v.reasoning = TagBody(text, "reasoning");
  v.reason = RequireStringKey(obj, "reason");
  const Json& match = RequireKey(obj, "match");
  const Json& reward = RequireKey(obj, "reward");
  if (!match.is_boolean()) throw Error(ErrorCode::kTypeError, "'match' is not a boolean");
  if (!reward.is_number() || (reward.get<double>() != 0.0 && reward.get<double>() != 1.0)) {
    throw Error(ErrorCode::kTypeError, "'reward' is not 0 or 1: " + reward.dump());
  }
  v.matched = match.get<bool>();
  if ((reward.get<double>() == 1.0) != v.matched) v.flags.push_back("coerced");
  return v;
}

DebateResult RunDebate(const JudgeCase& jc, const JudgeArchitecture& arch,
                       const PromptLibrary& prompts, Backend& backend,
                       const JudgeOptions& opts) {
  arch.Validate();
  DebateResult res;
  if (DetectPlaceholder(jc.idea, opts.placeholder_patterns, opts.min_words)) {
    res.transcript.halted_early = true;
    res.verdict = Verdict::Reject("idea is a placeholder or too short to judge", "placeholder");
    return res;
  }

  auto call = [&](Role role, int agent, int round, int attempt) {
    CompletionRequest req;
    req.messages = RenderTurn(prompts, role, agent, round, res.transcript.turns, jc);
    req.temperature = opts.temperature;
    req.max_tokens = opts.max_tokens;
    req.model = opts.model;
    req.route = RouteTag{jc.id, std::string(ToString(role)), round, agent, attempt};
    ++res.backend_calls;
    try {
      return backend.Complete(req);
    } catch (const Error& e) {
      throw DebateError(e.code(), e.what(), res.transcript);
    }
  };

  // Returns false when the turn's content asks to stop the debate.
  auto speak = [&](Role role, int agent, int round) {
    std::string content = call(role, agent, round, 0);
    const auto phrase = HaltPhrase(content, opts.halt_phrases);
    res.transcript.turns.push_back(DebateTurn{round, role, agent, std::move(content)});
    if (!phrase) return true;
    res.transcript.halted_early = true;
    res.verdict = Verdict::Reject(
        std::string(DisplayName(role)) + " #" + std::to_string(agent + 1) + " halted: '" +
            *phrase + "'",
        "halted");
    return false;
  };

  for (int round = 1; round <= arch.rounds; ++round) {
    if (arch.moderator && !speak(Role::kModerator, 0, round)) return res;
    for (int a = 0; a < arch.analysts; ++a) {
      if (!speak(Role::kAnalyst, a, round)) return res;
    }
    for (int c = 0; c < arch.critics; ++c) {
      if (!speak(Role::kCritic, c, round)) return res;
    }
  }

  if (!arch.evaluator) {
    res.verdict = Verdict::Reject("no-aggregator", "no-aggregator");
    return res;
  }

  std::string content;
  std::string last_error;
  for (int attempt = 0; attempt <= opts.evaluator_retries; ++attempt) {
    content = call(Role::kEvaluator, 0, arch.rounds, attempt);
    try {
      res.verdict = ParseEvaluatorOutput(content);
      res.transcript.turns.push_back(DebateTurn{arch.rounds, Role::kEvaluator, 0, content});
      return res;
    } catch (const Error& e) {
      if (!IsParseError(e.code())) throw;
      last_error = e.what();
    }
  }
  res.transcript.turns.push_back(DebateTurn{arch.rounds, Role::kEvaluator, 0, content});
  res.verdict = Verdict::Reject("unparseable evaluator output: " + last_error, "unparseable");
  return res;
}

Verdict SingleCallJudge(const JudgeCase& jc, const PromptLibrary& prompts, Backend& backend,
                        const JudgeOptions& opts) {
  const PromptPair& pair = prompts.Get("single_judge");
  const std::map<std::string, std::string> slots = {
      {"rq", jc.question.text}, {"abs", jc.golden.text}, {"idea", jc.idea}};
  CompletionRequest req;
  req.messages = {ChatMessage{ChatRole::kSystem, pair.system},
                  ChatMessage{ChatRole::kUser,
                              Render(pair.user, slots, RequiredSlots("single_judge"))}};
  req.temperature = opts.temperature;
  req.max_tokens = opts.max_tokens;
  req.model = opts.model;
  req.route = RouteTag{jc.id, "single_judge", 1, 0, 0};
  const std::string text = backend.Complete(req);
  try {
    return ParseEvaluatorOutput(text);
  } catch (const Error& e) {
    if (!IsParseError(e.code())) throw;
    return Verdict::Reject(std::string("unparseable judge output: ") + e.what(), "unparseable");
  }
}

std::string_view ToString(JudgeStrategy s) {
  switch (s) {
    case JudgeStrategy::kMultiAgent: return "multi_agent";
    case JudgeStrategy::kSingleCall: return "single_call";
    case JudgeStrategy::kEmbeddingSimilarity: return "embedding_similarity";
    case JudgeStrategy::kStructuredCompliance: return "structured_compliance";
    case JudgeStrategy::kKeywordHeuristic: return "keyword_heuristic";
    case JudgeStrategy::kMultiStageNovelty: return "multi_stage_novelty";
  }
  return "?";
}

JudgeStrategy ParseJudgeStrategy(std::string_view s) {
  for (JudgeStrategy v :
       {JudgeStrategy::kMultiAgent, JudgeStrategy::kSingleCall,
        JudgeStrategy::kEmbeddingSimilarity, JudgeStrategy::kStructuredCompliance,
        JudgeStrategy::kKeywordHeuristic, JudgeStrategy::kMultiStageNovelty}) {
    if (ToString(v) == s) return v;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown judge strategy '" + std::string(s) + "'");
}

DebateResult Judge::Run(const JudgeCase& jc, Backend& backend) const {
  switch (strategy) {
    case JudgeStrategy::kMultiAgent:
      return RunDebate(jc, arch, prompts, backend, options);
    case JudgeStrategy::kSingleCall: {
      DebateResult res;
      if (DetectPlaceholder(jc.idea, options.placeholder_patterns, options.min_words)) {
        res.transcript.halted_early = true;
        res.verdict = Verdict::Reject("idea is a placeholder or too short to judge", "placeholder");
        return res;
      }
      res.verdict = SingleCallJudge(jc, prompts, backend, options);
      res.backend_calls = 1;
      return res;
    }
    default:
      throw Error(ErrorCode::kInvalidArgument,
                  "judge strategy '" + std::string(ToString(strategy)) + "' is not implemented");
  }
}

RewardFn MakeJudgeReward(std::shared_ptr<Backend> backend, Judge judge, int parallelism,
                         TranscriptSink sink) {
  const int width = std::max(1, std::min(parallelism, backend->max_in_flight()));
  return [backend = std::move(backend), judge = std::move(judge), width, sink = std::move(sink)](
             const TrainingExample& ex, const RolloutGroup& group) {
    return ParallelMap(group.size(), width, [&](std::size_t i) {
      const Rollout& r = group.rollouts[i];
      JudgeCase jc{ex.question.id + "#" + std::to_string(i), ex.question, ex.golden,
                   r.answer.value_or(r.text)};
      DebateResult res = judge.Run(jc, *backend);
      if (sink) sink(jc, res);
      return res.verdict.reward();
    });
  };
}

}  // namespace ideagrpo
