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

#include "ideagrpo/evalharness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <set>

#include "ideagrpo/error.hpp"
#include "ideagrpo/jsonext.hpp"
#include "ideagrpo/parallel.hpp"

namespace ideagrpo {

namespace {

bool IsParseError(ErrorCode code) {
  return code == ErrorCode::kNoJsonBlock || code == ErrorCode::kMissingKey ||
         code == ErrorCode::kTypeError || code == ErrorCode::kParseFailure;
}

CompletionRequest MakeRequest(const EvalOptions& opts, const std::string& name,
                              const std::map<std::string, std::string>& slots, RouteTag route) {
  const PromptPair& pair = opts.prompts.Get(name);
  CompletionRequest req;
  req.messages = {ChatMessage{ChatRole::kSystem, pair.system},
                  ChatMessage{ChatRole::kUser, Render(pair.user, slots, RequiredSlots(name))}};
  req.temperature = opts.temperature;
  req.max_tokens = opts.max_tokens;
  req.model = opts.model;
  req.route = std::move(route);
  return req;
}

// Re-asks up to `retries` more times while the response fails to parse.
// Backend errors propagate; exhaustion is kParseFailure.
template <typename Parse>
auto AskParsed(Backend& backend, CompletionRequest req, int retries, Parse&& parse) {
  std::string last;
  for (int attempt = 0; attempt <= retries; ++attempt) {
    req.route.attempt = attempt;
    const std::string text = backend.Complete(req);
    try {
      return parse(text);
    } catch (const Error& e) {
      if (!IsParseError(e.code())) throw;
      last = e.what();
    }
  }
  throw Error(ErrorCode::kParseFailure,
              "unparseable after " + std::to_string(retries + 1) + " attempts: " + last);
}

Json LastObject(std::string_view text) {
  try {
    return ExtractJsonObject(text, JsonPick::kLast);
  } catch (const Error& e) {
    throw Error(ErrorCode::kParseFailure, e.what());
  }
}

std::string OptionalCell(const std::optional<double>& v, int decimals) {
  return v ? FormatFixed(*v, decimals) : std::string();
}

Json OptionalJson(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string IdString(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw Error(ErrorCode::kTypeError, "id must be a string or integer: " + v.dump());
}

std::optional<int> ScoreValue(const Json& v) {
  if (v.is_number_integer()) return static_cast<int>(v.get<long long>());
  if (v.is_number()) return static_cast<int>(v.get<double>());
  if (v.is_string()) {
    const std::string s = Trim(v.get<std::string>());
    try {
      std::size_t used = 0;
      const int n = std::stoi(s, &used);
      if (used > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return std::nullopt;
}

}  // namespace

std::string_view ToString(Criterion c) {
  switch (c) {
    case Criterion::kNovelty: return "novelty";
    case Criterion::kFeasibility: return "feasibility";
    case Criterion::kEffectiveness: return "effectiveness";
  }
  return "?";
}

int AbsoluteScores::Get(Criterion c) const {
  switch (c) {
    case Criterion::kNovelty: return novelty;
    case Criterion::kFeasibility: return feasibility;
    case Criterion::kEffectiveness: return effectiveness;
  }
  return 0;
}

AbsoluteScores ParseAbsoluteOutput(std::string_view text) {
  const Json obj = LastObject(text);
  auto score = [&](Criterion c) {
    const std::string key(ToString(c));
    auto it = obj.find(key);
    if (it == obj.end()) throw Error(ErrorCode::kParseFailure, "missing '" + key + "'");
    if (!it->is_number()) {
      throw Error(ErrorCode::kParseFailure, "'" + key + "' is not a number: " + it->dump());
    }
    const double v = it->get<double>();
    if (!(v >= 1 && v <= 5) || v != std::floor(v)) {
      throw Error(ErrorCode::kParseFailure, "'" + key + "' not an integer in [1,5]: " + it->dump());
    }
    return static_cast<int>(v);
  };
  return AbsoluteScores{score(Criterion::kNovelty), score(Criterion::kFeasibility),
                        score(Criterion::kEffectiveness)};
}

AbsoluteScores AbsoluteEval(std::string_view idea, const ResearchQuestion& question,
                            Backend& backend, const EvalOptions& opts) {
  CompletionRequest req = MakeRequest(
      opts, "absolute", {{"research_question", question.text}, {"method", std::string(idea)}},
      RouteTag{question.id, "absolute", 1, 0, 0});
  return AskParsed(backend, std::move(req), opts.retries, ParseAbsoluteOutput);
}

void from_json(const Json& j, IdeaRecord& r) {
  const Json& q = RequireKey(j, "question");
  if (q.is_string()) {
    r.question = ResearchQuestion{RequireStringKey(j, "question_id"), q.get<std::string>(),
                                  Source::kSynthetic};
  } else {
    r.question = q.get<ResearchQuestion>();
  }
  r.method = RequireStringKey(j, "method");
  r.idea = RequireStringKey(j, "idea");
}

void to_json(Json& j, const IdeaRecord& r) {
  j = Json{{"question_id", r.question.id},
           {"question", r.question.text},
           {"method", r.method},
           {"idea", r.idea}};
}

AbsoluteSummary AbsoluteEvalAll(std::span<const IdeaRecord> records, Backend& backend,
                                const EvalOptions& opts) {
  const auto results = ParallelMap(
      records.size(), opts.parallelism, [&](std::size_t i) -> std::optional<AbsoluteScores> {
        const IdeaRecord& r = records[i];
        ResearchQuestion scoped = r.question;
        scoped.id = r.question.id + "/" + r.method;
        try {
          return AbsoluteEval(r.idea, scoped, backend, opts);
        } catch (const Error&) {
          return std::nullopt;
        }
      });
  AbsoluteSummary s;
  std::map<std::string, std::map<Criterion, long>> sums;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::string& m = records[i].method;
    if (std::find(s.methods.begin(), s.methods.end(), m) == s.methods.end()) {
      s.methods.push_back(m);
      s.scored[m] = 0;
      s.failed[m] = 0;
    }
    if (!results[i]) {
      ++s.failed[m];
      continue;
    }
    ++s.scored[m];
    for (Criterion c : kCriteria) sums[m][c] += results[i]->Get(c);
  }
  for (const std::string& m : s.methods) {
    for (Criterion c : kCriteria) {
      s.means[m][c] = s.scored[m] > 0 ? static_cast<double>(sums[m][c]) / s.scored[m] : 0.0;
    }
  }
  return s;
}

std::array<Outcome, 3> ParsePairwiseOutput(std::string_view text) {
  const Json obj = LastObject(text);
  std::array<Outcome, 3> out{};
  for (std::size_t k = 0; k < kCriteria.size(); ++k) {
    const std::string key(ToString(kCriteria[k]));
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) {
      throw Error(ErrorCode::kParseFailure, "missing or non-string '" + key + "'");
    }
    const std::string v = ToLower(Trim(it->get<std::string>()));
    if (v == "a") {
      out[k] = Outcome::kFirst;
    } else if (v == "b") {
      out[k] = Outcome::kSecond;
    } else if (v == "equal") {
      out[k] = Outcome::kEqual;
    } else {
      throw Error(ErrorCode::kParseFailure, "'" + key + "' must be A, equal or B: " + it->dump());
    }
  }
  return out;
}

void AccumulateJudgment(const PairwiseJudgment& j, std::map<std::string, double>& net) {
  switch (j.outcome) {
    case Outcome::kFirst:
      net[j.first_method] += 1;
      net[j.second_method] -= 1;
      break;
    case Outcome::kSecond:
      net[j.first_method] -= 1;
      net[j.second_method] += 1;
      break;
    case Outcome::kEqual:
      break;
  }
}

TournamentResult PairwiseTournament(std::span<const PairwiseQuestion> questions,
                                    Backend& backend, const EvalOptions& opts) {
  struct Presentation {
    const PairwiseQuestion* q;
    std::string first, second;
    int index;
  };
  TournamentResult res;
  std::vector<Presentation> plan;
  for (const PairwiseQuestion& q : questions) {
    if (q.ideas.size() < 2) {
      throw Error(ErrorCode::kInvalidArgument,
                  "question '" + q.question.id + "' needs at least two methods");
    }
    std::vector<std::string> methods;
    for (const auto& [m, _] : q.ideas) {
      methods.push_back(m);
      if (std::find(res.methods.begin(), res.methods.end(), m) == res.methods.end()) {
        res.methods.push_back(m);
      }
    }
    int index = 0;
    for (std::size_t a = 0; a < methods.size(); ++a) {
      for (std::size_t b = a + 1; b < methods.size(); ++b) {
        plan.push_back({&q, methods[a], methods[b], index++});
        plan.push_back({&q, methods[b], methods[a], index++});
      }
    }
  }
  res.presentations = static_cast<int>(plan.size());

  using Attempt = std::pair<std::optional<std::array<Outcome, 3>>, std::string>;
  const auto outcomes = ParallelMap(plan.size(), opts.parallelism, [&](std::size_t i) {
    const Presentation& p = plan[i];
    CompletionRequest req = MakeRequest(opts, "pairwise",
                                        {{"research_question", p.q->question.text},
                                         {"method_a", p.q->ideas.at(p.first)},
                                         {"method_b", p.q->ideas.at(p.second)}},
                                        RouteTag{p.q->question.id, "pairwise", 1, p.index, 0});
    try {
      return Attempt{AskParsed(backend, std::move(req), opts.retries, ParsePairwiseOutput), ""};
    } catch (const Error& e) {
      return Attempt{std::nullopt, e.what()};
    }
  });

  for (Criterion c : kCriteria) {
    for (const std::string& m : res.methods) res.raw[c][m] = 0.0;
  }
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const Presentation& p = plan[i];
    if (!outcomes[i].first) {
      res.failures.push_back({p.q->question.id, p.first, p.second, outcomes[i].second});
      continue;
    }
    for (std::size_t k = 0; k < kCriteria.size(); ++k) {
      PairwiseJudgment j{p.q->question.id, kCriteria[k], p.first, p.second, (*outcomes[i].first)[k]};
      AccumulateJudgment(j, res.raw[kCriteria[k]]);
      res.judgments.push_back(std::move(j));
    }
  }
  for (Criterion c : kCriteria) res.normalized[c] = NormalizeScores(res.raw[c]);
  return res;
}

std::vector<double> NormalizeScores(std::span<const double> raw) {
  if (raw.empty()) return {};
  const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
  const double min = *lo, span = *hi - *lo;
  std::vector<double> out;
  out.reserve(raw.size());
  for (double v : raw) out.push_back(span == 0.0 ? 3.0 : 1.0 + 4.0 * (v - min) / span);
  return out;
}

std::map<std::string, double> NormalizeScores(const std::map<std::string, double>& raw) {
  std::vector<double> values;
  for (const auto& [_, v] : raw) values.push_back(v);
  const std::vector<double> norm = NormalizeScores(values);
  std::map<std::string, double> out;
  std::size_t i = 0;
  for (const auto& [k, _] : raw) out[k] = norm[i++];
  return out;
}

void to_json(Json& j, const BonResult& r) {
  Json evals = Json::array();
  for (const BonEvaluation& e : r.evaluations) {
    evals.push_back(Json{{"id", e.id},
                         {"sota_comparison", e.sota_comparison},
                         {"novelty_reasoning", e.novelty_reasoning},
                         {"novelty_score", e.novelty_score ? Json(*e.novelty_score) : Json()}});
  }
  j = Json{{"winner_index", r.winner_index}, {"winner_id", r.winner_id},
           {"rationale", r.rationale},       {"evaluations", evals},
           {"flags", r.flags}};
}

std::vector<std::string> BonCandidateIds(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i + 1));
  return ids;
}

std::string RenderBonIdeas(std::span<const std::string> candidates) {
  Json list = Json::array();
  const auto ids = BonCandidateIds(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    list.push_back(Json{{"id", ids[i]}, {"idea", candidates[i]}});
  }
  return list.dump(2);
}

BonResult ParseBonOutput(std::string_view text, std::span<const std::string> ids) {
  const Json obj = ExtractJsonObject(text, JsonPick::kLast);
  const Json& evals = RequireKey(obj, "idea_evaluations");
  const Json& winner = RequireKey(obj, "winner");
  if (!evals.is_array()) throw Error(ErrorCode::kTypeError, "'idea_evaluations' is not a list");
  if (!winner.is_object()) throw Error(ErrorCode::kTypeError, "'winner' is not an object");

  BonResult r;
  for (const Json& e : evals) {
    if (!e.is_object()) throw Error(ErrorCode::kTypeError, "evaluation entry is not an object");
    BonEvaluation ev;
    ev.id = IdString(RequireKey(e, "id"));
    ev.sota_comparison = e.value("sota_comparison", std::string());
    ev.novelty_reasoning = e.value("novelty_reasoning", std::string());
    if (auto it = e.find("novelty_score"); it != e.end()) ev.novelty_score = ScoreValue(*it);
    r.evaluations.push_back(std::move(ev));
  }
  r.winner_id = IdString(RequireKey(winner, "id"));
  if (auto it = winner.find("rationale"); it != winner.end() && it->is_string()) {
    r.rationale = it->get<std::string>();
  }

  const auto hit = std::find(ids.begin(), ids.end(), Trim(r.winner_id));
  if (hit != ids.end()) {
    r.winner_index = static_cast<std::size_t>(hit - ids.begin());
    return r;
  }
  std::vector<std::optional<int>> scores(ids.size());
  for (const BonEvaluation& ev : r.evaluations) {
    const auto at = std::find(ids.begin(), ids.end(), Trim(ev.id));
    if (at != ids.end() && ev.novelty_score && !scores[at - ids.begin()]) {
      scores[at - ids.begin()] = ev.novelty_score;
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] && (!scores[best] || *scores[i] > *scores[best])) best = i;
  }
  r.winner_index = best;
  r.winner_id = ids[best];
  r.flags.push_back("unknown-winner");
  return r;
}

BonResult BestOfN(const ResearchQuestion& question, std::span<const std::string> candidates,
                  Backend& backend, const EvalOptions& opts) {
  if (candidates.empty()) throw Error(ErrorCode::kEmptyInput, "best-of-n needs a candidate");
  const auto ids = BonCandidateIds(candidates.size());
  if (candidates.size() == 1) {
    BonResult r;
    r.winner_id = ids[0];
    return r;
  }
  CompletionRequest req = MakeRequest(
      opts, "bon",
      {{"research_question", question.text}, {"ideas", RenderBonIdeas(candidates)}},
      RouteTag{question.id, "bon", 1, 0, 0});
  try {
    return AskParsed(backend, std::move(req), opts.retries,
                     [&](const std::string& text) { return ParseBonOutput(text, ids); });
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kParseFailure) throw;
    BonResult r;
    r.winner_id = ids[0];
    r.rationale = e.what();
    r.flags.push_back("unparseable");
    return r;
  }
}

void to_json(Json& j, const MetricsReport& m) {
  j = Json{{"precision", OptionalJson(m.precision)},
           {"recall", OptionalJson(m.recall)},
           {"f1", OptionalJson(m.f1)},
           {"accuracy", m.accuracy},
           {"tp", m.tp},
           {"fp", m.fp},
           {"fn", m.fn},
           {"tn", m.tn}};
}

MetricsReport ComputeMetrics(std::span<const LabeledVerdict> labeled) {
  if (labeled.empty()) throw Error(ErrorCode::kEmptyInput, "no labeled verdicts");
  MetricsReport m;
  for (const LabeledVerdict& v : labeled) {
    if ((v.predicted != 0 && v.predicted != 1) || (v.expert_label != 0 && v.expert_label != 1)) {
      throw Error(ErrorCode::kNonBinaryReward, "case '" + v.case_id + "' is not binary");
    }
    if (v.predicted == 1) {
      (v.expert_label == 1 ? m.tp : m.fp)++;
    } else {
      (v.expert_label == 1 ? m.fn : m.tn)++;
    }
  }
  if (m.tp + m.fp > 0) m.precision = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
  if (m.tp + m.fn > 0) m.recall = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
  if (m.precision && m.recall) {
    const double s = *m.precision + *m.recall;
    m.f1 = s > 0 ? 2.0 * *m.precision * *m.recall / s : 0.0;
  }
  m.accuracy = static_cast<double>(m.tp + m.tn) / static_cast<double>(labeled.size());
  return m;
}

void from_json(const Json& j, LabeledCase& c) {
  c.jc = j.get<JudgeCase>();
  c.label = ParseBinaryReward(RequireKey(j, "label"));
}

MeanMetrics MeanOf(std::span<const MetricsReport> runs) {
  MeanMetrics out;
  auto mean = [&](auto field) -> std::optional<double> {
    double sum = 0;
    int n = 0;
    for (const MetricsReport& r : runs) {
      if (const auto& v = r.*field) {
        sum += *v;
        ++n;
      }
    }
    return n ? std::optional<double>(sum / n) : std::nullopt;
  };
  out.precision = mean(&MetricsReport::precision);
  out.recall = mean(&MetricsReport::recall);
  out.f1 = mean(&MetricsReport::f1);
  for (const MetricsReport& r : runs) out.accuracy += r.accuracy;
  if (!runs.empty()) out.accuracy /= static_cast<double>(runs.size());
  return out;
}

std::vector<ArchitectureReport> AblationRun(std::span<const JudgeArchitecture> archs,
                                            std::span<const LabeledCase> cases,
                                            Backend& backend, int repeats,
                                            const Judge& base_judge, int parallelism) {
  if (repeats < 1) throw Error(ErrorCode::kInvalidArgument, "repeats must be >= 1");
  if (cases.empty()) throw Error(ErrorCode::kEmptyInput, "no labeled cases");
  std::vector<ArchitectureReport> reports;
  for (const JudgeArchitecture& arch : archs) {
    arch.Validate();
    Judge judge = base_judge;
    judge.arch = arch;
    ArchitectureReport rep;
    rep.arch = arch;
    std::atomic<int> failures{0};
    for (int run = 0; run < repeats; ++run) {
      const auto labeled = ParallelMap(cases.size(), parallelism, [&](std::size_t i) {
        JudgeCase jc = cases[i].jc;
        jc.id = arch.name + "/" + cases[i].jc.id + "/run" + std::to_string(run + 1);
        int predicted = 0;
        try {
          predicted = judge.Run(jc, backend).verdict.reward();
        } catch (const Error&) {
          ++failures;
        }
        return LabeledVerdict{cases[i].jc.id, predicted, cases[i].label};
      });
      rep.runs.push_back(ComputeMetrics(labeled));
    }
    rep.failures = failures.load();
    rep.mean = MeanOf(rep.runs);
    reports.push_back(std::move(rep));
  }
  return reports;
}

std::string FormatFixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::string AblationCsv(std::span<const ArchitectureReport> reports) {
  std::size_t runs = 0;
  for (const auto& r : reports) runs = std::max(runs, r.runs.size());
  std::string out = "architecture,precision_mean,recall_mean,f1_mean,accuracy_mean,failures";
  for (std::size_t k = 1; k <= runs; ++k) {
    out += ",precision_run" + std::to_string(k) + ",recall_run" + std::to_string(k);
  }
  out += "\n";
  for (const auto& r : reports) {
    out += r.arch.name + "," + OptionalCell(r.mean.precision, 3) + "," +
           OptionalCell(r.mean.recall, 3) + "," + OptionalCell(r.mean.f1, 3) + "," +
           FormatFixed(r.mean.accuracy, 3) + "," + std::to_string(r.failures);
    for (std::size_t k = 0; k < runs; ++k) {
      if (k < r.runs.size()) {
        out += "," + OptionalCell(r.runs[k].precision, 3) + "," + OptionalCell(r.runs[k].recall, 3);
      } else {
        out += ",,";
      }
    }
    out += "\n";
  }
  return out;
}

std::string AblationDeltaCsv(std::span<const ArchitectureReport> reports) {
  const auto base = std::find_if(reports.begin(), reports.end(),
                                 [](const auto& r) { return r.arch.name == "ordinary"; });
  if (base == reports.end()) {
    throw Error(ErrorCode::kInvalidArgument, "delta table needs the 'ordinary' architecture");
  }
  auto delta = [](const std::optional<double>& a, const std::optional<double>& b) {
    return a && b ? FormatFixed(*a - *b, 3) : std::string();
  };
  std::string out = "architecture,delta_precision,delta_recall\n";
  for (const auto& r : reports) {
    out += r.arch.name + "," + delta(r.mean.precision, base->mean.precision) + "," +
           delta(r.mean.recall, base->mean.recall) + "\n";
  }
  return out;
}

Json AblationJson(std::span<const ArchitectureReport> reports) {
  Json out = Json::array();
  for (const auto& r : reports) {
    Json runs = Json::array();
    for (const auto& m : r.runs) runs.push_back(m);
    out.push_back(Json{{"architecture", r.arch},
                       {"mean",
                        {{"precision", OptionalJson(r.mean.precision)},
                         {"recall", OptionalJson(r.mean.recall)},
                         {"f1", OptionalJson(r.mean.f1)},
                         {"accuracy", r.mean.accuracy}}},
                       {"runs", runs},
                       {"failures", r.failures}});
  }
  return out;
}

std::string AbsoluteCsv(const std::string& dataset, const AbsoluteSummary& s) {
  std::string out = "dataset,metric,method,value\n";
  for (Criterion c : kCriteria) {
    for (const std::string& m : s.methods) {
      out += dataset + "," + std::string(ToString(c)) + "," + m + "," +
             FormatFixed(s.means.at(m).at(c)) + "\n";
    }
  }
  return out;
}

std::string TournamentCsv(const std::string& dataset, const TournamentResult& r) {
  std::string out = "dataset,metric,method,value\n";
  for (Criterion c : kCriteria) {
    for (const std::string& m : r.methods) {
      out += dataset + "," + std::string(ToString(c)) + "," + m + "," +
             FormatFixed(r.normalized.at(c).at(m)) + "\n";
    }
  }
  return out;
}

Json AbsoluteJson(const std::string& dataset, const AbsoluteSummary& s) {
  Json rows = Json::array();
  for (const std::string& m : s.methods) {
    Json row{{"dataset", dataset},
             {"method", m},
             {"scored", s.scored.at(m)},
             {"failed", s.failed.at(m)}};
    for (Criterion c : kCriteria) row[std::string(ToString(c))] = s.means.at(m).at(c);
    rows.push_back(row);
  }
  return rows;
}

Json TournamentJson(const std::string& dataset, const TournamentResult& r) {
  Json rows = Json::array();
  for (const std::string& m : r.methods) {
    Json row{{"dataset", dataset}, {"method", m}};
    for (Criterion c : kCriteria) {
      row[std::string(ToString(c))] = {{"raw", r.raw.at(c).at(m)},
                                       {"normalized", r.normalized.at(c).at(m)}};
    }
    rows.push_back(row);
  }
  Json failures = Json::array();
  for (const FailedPair& f : r.failures) {
    failures.push_back(Json{{"question_id", f.question_id},
                            {"first", f.first_method},
                            {"second", f.second_method},
                            {"error", f.error}});
  }
  return Json{{"methods", rows},
              {"presentations", r.presentations},
              {"judgments", r.judgments.size()},
              {"failed_pairs", failures}};
}

}  // namespace ideagrpo
