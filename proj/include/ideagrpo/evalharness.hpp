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


#ifndef IDEAGRPO_EVALHARNESS_HPP_
#define IDEAGRPO_EVALHARNESS_HPP_

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ideagrpo/backend.hpp"
#include "ideagrpo/domain.hpp"
#include "ideagrpo/judge.hpp"
#include "ideagrpo/prompts.hpp"

namespace ideagrpo {

enum class Criterion { kNovelty, kFeasibility, kEffectiveness };
inline constexpr std::array<Criterion, 3> kCriteria = {
    Criterion::kNovelty, Criterion::kFeasibility, Criterion::kEffectiveness};
std::string_view ToString(Criterion c);

struct EvalOptions {
  PromptLibrary prompts = PromptLibrary::Defaults();
  // Extra attempts after an unparseable response.
  int retries = 2;
  double temperature = 0.0;
  int max_tokens = 4096;
  std::string model;
  int parallelism = 1;
};

// ---- absolute ----

struct AbsoluteScores {
  int novelty = 0;
  int feasibility = 0;
  int effectiveness = 0;

  int Get(Criterion c) const;
  bool operator==(const AbsoluteScores&) const = default;
};

// Last JSON object of the response; each criterion must be an integer in
// [1,5]. Throws kParseFailure otherwise.
AbsoluteScores ParseAbsoluteOutput(std::string_view text);

AbsoluteScores AbsoluteEval(std::string_view idea, const ResearchQuestion& question,
                            Backend& backend, const EvalOptions& opts = {});

// One idea produced by one method for one question.
struct IdeaRecord {
  ResearchQuestion question;
  std::string method;
  std::string idea;
};

void from_json(const Json& j, IdeaRecord& r);
void to_json(Json& j, const IdeaRecord& r);

struct AbsoluteSummary {
  std::vector<std::string> methods;
  // method -> criterion -> mean over scored records.
  std::map<std::string, std::map<Criterion, double>> means;
  std::map<std::string, int> scored;
  std::map<std::string, int> failed;
};

AbsoluteSummary AbsoluteEvalAll(std::span<const IdeaRecord> records, Backend& backend,
                                const EvalOptions& opts = {});

// ---- pairwise ----

enum class Outcome { kFirst, kEqual, kSecond };

struct PairwiseJudgment {
  std::string question_id;
  Criterion criterion = Criterion::kNovelty;
  std::string first_method;
  std::string second_method;
  Outcome outcome = Outcome::kEqual;
};

// {"novelty": "A"|"equal"|"B", ...} from the last JSON object, A mapping to
// the first-presented method.
std::array<Outcome, 3> ParsePairwiseOutput(std::string_view text);

struct PairwiseQuestion {
  ResearchQuestion question;
  // method id -> idea text
  std::map<std::string, std::string> ideas;
};

struct FailedPair {
  std::string question_id;
  std::string first_method;
  std::string second_method;
  std::string error;
};

struct TournamentResult {
  std::vector<std::string> methods;
  std::map<Criterion, std::map<std::string, double>> raw;
  std::map<Criterion, std::map<std::string, double>> normalized;
  std::vector<PairwiseJudgment> judgments;
  std::vector<FailedPair> failures;
  // Presentations issued (one backend exchange judges all three criteria).
  int presentations = 0;
};

// Every unordered pair of methods, once in each order, per question. Pairs
// whose judgment fails are excluded from the sums and listed in failures.
TournamentResult PairwiseTournament(std::span<const PairwiseQuestion> questions,
                                    Backend& backend, const EvalOptions& opts = {});

// Net score contribution of one judgment: +1 to the preferred method, -1 to
// the other, nothing on equal.
void AccumulateJudgment(const PairwiseJudgment& j, std::map<std::string, double>& net);

// Affine map with min -> 1 and max -> 5; a zero span maps everything to 3.
std::map<std::string, double> NormalizeScores(const std::map<std::string, double>& raw);
std::vector<double> NormalizeScores(std::span<const double> raw);

// ---- best of n ----

struct BonEvaluation {
  std::string id;
  std::string sota_comparison;
  std::string novelty_reasoning;
  std::optional<int> novelty_score;
};

struct BonResult {
  std::size_t winner_index = 0;
  std::string winner_id;
  std::string rationale;
  std::vector<BonEvaluation> evaluations;
  // "unknown-winner" or "unparseable" when a fallback chose the winner.
  std::vector<std::string> flags;
};

void to_json(Json& j, const BonResult& r);

// Candidate ids are "1".."n" in submission order.
std::vector<std::string> BonCandidateIds(std::size_t n);
std::string RenderBonIdeas(std::span<const std::string> candidates);

// Parses the BoN schema and resolves the winner against `ids`. An unknown
// winner id falls back to the highest novelty_score (lowest index on ties)
// and is flagged "unknown-winner". Throws kParseFailure / kNoJsonBlock /
// kMissingKey / kTypeError on schema violations.
BonResult ParseBonOutput(std::string_view text, std::span<const std::string> ids);

// n == 1 returns candidate 0 without a backend call. Unparseable after
// retries returns candidate 0 flagged "unparseable".
BonResult BestOfN(const ResearchQuestion& question, std::span<const std::string> candidates,
                  Backend& backend, const EvalOptions& opts = {});

// ---- metrics ----

struct LabeledVerdict {
  std::string case_id;
  int predicted = 0;
  int expert_label = 0;
};

struct MetricsReport {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  double accuracy = 0.0;
  long tp = 0, fp = 0, fn = 0, tn = 0;
};

void to_json(Json& j, const MetricsReport& m);

// Throws kEmptyInput for an empty set and kNonBinaryReward for labels
// outside {0,1}. Zero-denominator ratios are left absent.
MetricsReport ComputeMetrics(std::span<const LabeledVerdict> labeled);

struct LabeledCase {
  JudgeCase jc;
  int label = 0;
};

void from_json(const Json& j, LabeledCase& c);

struct MeanMetrics {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  double accuracy = 0.0;
};

struct ArchitectureReport {
  JudgeArchitecture arch;
  std::vector<MetricsReport> runs;
  MeanMetrics mean;
  // Debates that failed at the backend and were scored 0.
  int failures = 0;
};

// Each run judges every case with a distinct route scope
// ("<arch>/<case>/run<r>"), so replayed runs stay separate cache entries.
std::vector<ArchitectureReport> AblationRun(std::span<const JudgeArchitecture> archs,
                                            std::span<const LabeledCase> cases,
                                            Backend& backend, int repeats,
                                            const Judge& base_judge, int parallelism = 1);

// Mean of each ratio over the runs where it is defined.
MeanMetrics MeanOf(std::span<const MetricsReport> runs);

// ---- tables ----

std::string FormatFixed(double v, int decimals = 2);

// Per-architecture precision/recall table with mean and per-run columns.
std::string AblationCsv(std::span<const ArchitectureReport> reports);
// Mean precision/recall minus the "ordinary" row. Throws kInvalidArgument
// when no report is named "ordinary".
std::string AblationDeltaCsv(std::span<const ArchitectureReport> reports);
Json AblationJson(std::span<const ArchitectureReport> reports);

// Long-format rows dataset,metric,method,value.
std::string AbsoluteCsv(const std::string& dataset, const AbsoluteSummary& s);
std::string TournamentCsv(const std::string& dataset, const TournamentResult& r);
Json AbsoluteJson(const std::string& dataset, const AbsoluteSummary& s);
Json TournamentJson(const std::string& dataset, const TournamentResult& r);

}  // namespace ideagrpo

#endif  // IDEAGRPO_EVALHARNESS_HPP_
