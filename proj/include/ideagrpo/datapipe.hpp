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


#ifndef IDEAGRPO_DATAPIPE_HPP_
#define IDEAGRPO_DATAPIPE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ideagrpo/backend.hpp"
#include "ideagrpo/domain.hpp"
#include "ideagrpo/prompts.hpp"

namespace ideagrpo {

// ---- corpus and splits ----

// Parses corpus JSONL. Blank lines are skipped. Throws kMalformed naming the
// 1-based line number, or kDuplicateId.
std::vector<TrainingExample> ParseCorpus(std::string_view jsonl);
// As ParseCorpus; a missing file is kIo.
std::vector<TrainingExample> LoadCorpus(const std::string& path);
void WriteCorpus(const std::string& path, std::span<const TrainingExample> examples);

// Keeps records whose score is present and >= threshold.
std::vector<TrainingExample> FilterByScore(std::span<const TrainingExample> corpus,
                                           double threshold);

struct SplitSpec {
  // Filled in this order from the shuffled corpus.
  std::vector<std::pair<Split, int>> counts;
  std::uint64_t seed = 0;

  int total() const;
  // RL train 320, RL val 40, RL test 40, SFT train 80, SFT val 16.
  static SplitSpec Standard(std::uint64_t seed = 0);
};

void to_json(Json& j, const SplitSpec& s);
// {"seed": n, "counts": {"rl_train": 320, ...}}; count keys are applied in
// the fixed rl_train, rl_val, rl_test, sft_train, sft_val order.
void from_json(const Json& j, SplitSpec& s);

// Seeded Fisher-Yates shuffle of indices, then sequential assignment.
// Returns one Split per corpus record (kNone for unassigned records).
// Throws kInsufficientCorpus when the counts exceed the corpus.
std::vector<Split> MakeSplits(std::span<const TrainingExample> corpus, const SplitSpec& spec);

// Writes <dir>/<split>.jsonl for every split in spec, records in shuffled
// order with the split field set. Returns the paths written.
std::vector<std::string> WriteSplitFiles(const std::string& dir,
                                         std::span<const TrainingExample> corpus,
                                         std::span<const Split> assignment, const SplitSpec& spec);

// ---- dataset preparation prompts ----

struct PrepOptions {
  PromptLibrary prompts = PromptLibrary::Defaults();
  int retries = 2;
  double temperature = 0.0;
  int max_tokens = 4096;
  std::string model;
};

enum class PaperType { kSurvey, kNewIdea, kEvaluation };
std::string_view ToString(PaperType t);

struct PaperClassification {
  std::string paper_id;
  PaperType paper_type = PaperType::kNewIdea;
  std::string reasoning;
};

void to_json(Json& j, const PaperClassification& c);

// All parsers below accept fenced or bare JSON and throw kParseFailure on
// missing keys, wrong types, or out-of-enum values.
PaperClassification ParseClassification(std::string_view text);
PaperClassification ClassifyPaper(const std::string& paper_id, const std::string& title,
                                  const std::string& abstract, Backend& backend,
                                  const PrepOptions& opts = {});

struct QuestionExtraction {
  std::string research_question;
  std::string reasoning;
  // Soft rule violations: "too-long", "non-interrogative-start",
  // "no-question-mark".
  std::vector<std::string> warnings;
};

QuestionExtraction ParseQuestionExtraction(std::string_view text);
QuestionExtraction ExtractResearchQuestion(const std::string& paper_id, const std::string& title,
                                           const std::string& abstract, Backend& backend,
                                           const PrepOptions& opts = {});

struct GoldenIdea {
  std::string research_question;
  std::string reasoning;
  std::string method;
  // "prohibited-reference", "too-many-sentences", "no-question-mark".
  std::vector<std::string> warnings;
};

GoldenIdea ParseGoldenIdea(std::string_view text);
GoldenIdea ExtractGoldenIdea(const std::string& paper_id, const std::string& full_text,
                             Backend& backend, const PrepOptions& opts = {});

// Splits "<reasoning>...</reasoning><answer>...</answer>". Anything else is
// a format violation: answer becomes the whole text and format_ok is false.
struct GenerationParse {
  std::optional<std::string> reasoning;
  std::string answer;
  bool format_ok = false;
};

GenerationParse ParseGeneration(std::string_view text);

std::size_t SentenceCount(std::string_view text);

}  // namespace ideagrpo

#endif  // IDEAGRPO_DATAPIPE_HPP_
