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


#ifndef IDEAGRPO_JUDGE_HPP_
#define IDEAGRPO_JUDGE_HPP_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ideagrpo/backend.hpp"
#include "ideagrpo/domain.hpp"
#include "ideagrpo/error.hpp"
#include "ideagrpo/grpo.hpp"
#include "ideagrpo/prompts.hpp"

namespace ideagrpo {

// Which agents take part in a debate and for how many rounds.
struct JudgeArchitecture {
  std::string name;
  bool moderator = false;
  int analysts = 2;
  int critics = 0;
  bool evaluator = true;
  int rounds = 2;

  void Validate() const;
  // Turns issued by a full debate, evaluator included.
  int ScheduledTurns() const;

  bool operator==(const JudgeArchitecture&) const = default;
};

// Named architectures:
//   ordinary       moderator + 1 analyst + 1 critic + evaluator
//   no-moderator, no-analyst, no-critic, no-evaluator
//                  ordinary with that role removed
//   ordinary+ca    ordinary with a second critic and a second analyst
//   <N>a1e         N analysts + evaluator (N = 1..6); "2a1e" is the default
JudgeArchitecture NamedArchitecture(std::string_view name);
std::vector<std::string> ArchitectureNames();
// A registered name, or a JSON object with the JudgeArchitecture fields.
JudgeArchitecture ParseArchitecture(const Json& spec);

void to_json(Json& j, const JudgeArchitecture& a);
void from_json(const Json& j, JudgeArchitecture& a);

struct JudgeCase {
  std::string id;
  ResearchQuestion question;
  GoldenAbstract golden;
  std::string idea;
};

void to_json(Json& j, const JudgeCase& c);
void from_json(const Json& j, JudgeCase& c);

std::vector<std::string> DefaultPlaceholderPatterns();

struct JudgeOptions {
  int evaluator_retries = 2;
  double temperature = 0.0;
  int max_tokens = 4096;
  std::string model;
  // Case-insensitive ECMAScript regexes searched in the idea.
  std::vector<std::string> placeholder_patterns = DefaultPlaceholderPatterns();
  std::size_t min_words = 20;
  // An agent turn containing one of these (case-insensitive) stops the
  // debate with reward 0. Empty disables the check.
  std::vector<std::string> halt_phrases = {"halt the discussion", "end the discussion"};
};

void to_json(Json& j, const JudgeOptions& o);
void from_json(const Json& j, JudgeOptions& o);

struct DebateResult {
  Verdict verdict;
  DebateTranscript transcript;
  int backend_calls = 0;
};

// A backend failure mid-debate. Carries the transcript up to the failure.
class DebateError : public Error {
 public:
  DebateError(ErrorCode code, const std::string& what, DebateTranscript partial)
      : Error(code, what), partial_(std::move(partial)) {}
  const DebateTranscript& partial() const { return partial_; }

 private:
  DebateTranscript partial_;
};

bool DetectPlaceholder(std::string_view idea, const std::vector<std::string>& patterns,
                       std::size_t min_words = 20);

// Prior turns as "[Round r][Role#k]: content" blocks (k is 1-based),
// separated by blank lines.
std::string RenderHistory(const std::vector<DebateTurn>& turns);

std::vector<ChatMessage> RenderTurn(const PromptLibrary& prompts, Role role, int agent_index,
                                    int round, const std::vector<DebateTurn>& history,
                                    const JudgeCase& jc);

// Tag bodies plus the first fenced JSON object. Throws kNoJsonBlock,
// kMissingKey or kTypeError. A reward that disagrees with match is replaced
// by the match value and flagged "coerced".
Verdict ParseEvaluatorOutput(std::string_view text);

DebateResult RunDebate(const JudgeCase& jc, const JudgeArchitecture& arch,
                       const PromptLibrary& prompts, Backend& backend,
                       const JudgeOptions& opts = {});

// One completion under the evaluator's verdict contract. Unparseable output
// is a rejection flagged "unparseable".
Verdict SingleCallJudge(const JudgeCase& jc, const PromptLibrary& prompts, Backend& backend,
                        const JudgeOptions& opts = {});

// Only kMultiAgent and kSingleCall are implemented; the rest are reserved.
enum class JudgeStrategy {
  kMultiAgent,
  kSingleCall,
  kEmbeddingSimilarity,
  kStructuredCompliance,
  kKeywordHeuristic,
  kMultiStageNovelty,
};

std::string_view ToString(JudgeStrategy s);
JudgeStrategy ParseJudgeStrategy(std::string_view s);

struct Judge {
  JudgeStrategy strategy = JudgeStrategy::kMultiAgent;
  JudgeArchitecture arch = NamedArchitecture("2a1e");
  PromptLibrary prompts = PromptLibrary::Defaults();
  JudgeOptions options;

  // Throws kInvalidArgument for reserved strategies.
  DebateResult Run(const JudgeCase& jc, Backend& backend) const;
};

// Called once per judged rollout, possibly from several threads at once.
using TranscriptSink = std::function<void(const JudgeCase&, const DebateResult&)>;

// Rewards every rollout's answer (or text) with the judge. A backend failure
// on any rollout throws, so the trainer skips the whole group.
RewardFn MakeJudgeReward(std::shared_ptr<Backend> backend, Judge judge, int parallelism,
                         TranscriptSink sink = nullptr);

}  // namespace ideagrpo

#endif  // IDEAGRPO_JUDGE_HPP_
