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

#include "ideagrpo/datapipe.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include "ideagrpo/error.hpp"
#include "ideagrpo/jsonext.hpp"

namespace ideagrpo {

namespace {

namespace fs = std::filesystem;

constexpr Split kSplitOrder[] = {Split::kRlTrain, Split::kRlVal, Split::kRlTest,
                                 Split::kSftTrain, Split::kSftVal};

bool IsParseError(ErrorCode code) {
  return code == ErrorCode::kNoJsonBlock || code == ErrorCode::kMissingKey ||
         code == ErrorCode::kTypeError || code == ErrorCode::kParseFailure;
}

// Runs `parse`, mapping every parse-family error to kParseFailure.
template <typename Fn>
auto AsParseFailure(Fn&& parse) {
  try {
    return parse();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParseFailure || !IsParseError(e.code())) throw;
    throw Error(ErrorCode::kParseFailure, e.what());
  }
}

template <typename Parse>
auto Ask(Backend& backend, const PrepOptions& opts, const std::string& name,
         const std::map<std::string, std::string>& slots, const std::string& scope,
         Parse&& parse) {
  const PromptPair& pair = opts.prompts.Get(name);
  CompletionRequest req;
  req.messages = {ChatMessage{ChatRole::kSystem, pair.system},
                  ChatMessage{ChatRole::kUser, Render(pair.user, slots, RequiredSlots(name))}};
  req.temperature = opts.temperature;
  req.max_tokens = opts.max_tokens;
  req.model = opts.model;
  std::string last;
  for (int attempt = 0; attempt <= opts.retries; ++attempt) {
    req.route = RouteTag{scope, name, 1, 0, attempt};
    const std::string text = backend.Complete(req);
    try {
      return parse(text);
    } catch (const Error& e) {
      if (!IsParseError(e.code())) throw;
      last = e.what();
    }
  }
  throw Error(ErrorCode::kParseFailure, name + " output unparseable: " + last);
}

std::vector<std::size_t> ShuffledOrder(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    std::swap(order[i - 1], order[static_cast<std::size_t>(u * static_cast<double>(i))]);
  }
  return order;
}

std::string FirstWordLower(std::string_view s) {
  const std::string t = Trim(s);
  std::size_t end = 0;
  while (end < t.size() && std::isalpha(static_cast<unsigned char>(t[end]))) ++end;
  return ToLower(t.substr(0, end));
}

}  // namespace

std::vector<TrainingExample> ParseCorpus(std::string_view jsonl) {
  std::vector<TrainingExample> out;
  std::set<std::string> ids;
  std::size_t line_no = 0, pos = 0;
  while (pos <= jsonl.size()) {
    std::size_t nl = jsonl.find('\n', pos);
    if (nl == std::string_view::npos) nl = jsonl.size();
    const std::string line = Trim(jsonl.substr(pos, nl - pos));
    ++line_no;
    pos = nl + 1;
    if (line.empty()) continue;
    TrainingExample ex;
    try {
      ex = FromCorpusLine(Json::parse(line));
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kMalformed, "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!ids.insert(ex.question.id).second) {
      throw Error(ErrorCode::kDuplicateId,
                  "line " + std::to_string(line_no) + ": duplicate id '" + ex.question.id + "'");
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<TrainingExample> LoadCorpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "corpus not found: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseCorpus(ss.str());
}

void WriteCorpus(const std::string& path, std::span<const TrainingExample> examples) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  for (const TrainingExample& ex : examples) out << ToCorpusLine(ex).dump() << "\n";
}

std::vector<TrainingExample> FilterByScore(std::span<const TrainingExample> corpus,
                                           double threshold) {
  std::vector<TrainingExample> out;
  for (const TrainingExample& ex : corpus) {
    if (ex.score && *ex.score >= threshold) out.push_back(ex);
  }
  return out;
}

int SplitSpec::total() const {
  int n = 0;
  for (const auto& [_, c] : counts) n += c;
  return n;
}

SplitSpec SplitSpec::Standard(std::uint64_t seed) {
  SplitSpec s;
  s.counts = {{Split::kRlTrain, 320},
              {Split::kRlVal, 40},
              {Split::kRlTest, 40},
              {Split::kSftTrain, 80},
              {Split::kSftVal, 16}};
  s.seed = seed;
  return s;
}

void to_json(Json& j, const SplitSpec& s) {
  Json counts = Json::object();
  for (const auto& [split, n] : s.counts) counts[std::string(ToString(split))] = n;
  j = Json{{"seed", s.seed}, {"counts", counts}};
}

void from_json(const Json& j, SplitSpec& s) {
  s.seed = j.value("seed", s.seed);
  const Json& counts = RequireKey(j, "counts");
  if (!counts.is_object()) throw Error(ErrorCode::kTypeError, "'counts' must be an object");
  for (const auto& [key, _] : counts.items()) {
    const Split split = ParseSplit(key);
    if (split == Split::kNone) throw Error(ErrorCode::kInvalidArgument, "split 'none' has no count");
  }
  s.counts.clear();
  for (Split split : kSplitOrder) {
    const std::string key(ToString(split));
    if (!counts.contains(key)) continue;
    const int n = counts.at(key).get<int>();
    if (n < 0) throw Error(ErrorCode::kInvalidArgument, "negative count for " + key);
    s.counts.emplace_back(split, n);
  }
}

std::vector<Split> MakeSplits(std::span<const TrainingExample> corpus, const SplitSpec& spec) {
  for (const auto& [split, n] : spec.counts) {
    if (n < 0) throw Error(ErrorCode::kInvalidArgument, "negative split count");
  }
  if (static_cast<std::size_t>(spec.total()) > corpus.size()) {
    throw Error(ErrorCode::kInsufficientCorpus,
                "split counts sum to " + std::to_string(spec.total()) + " but the corpus has " +
                    std::to_string(corpus.size()) + " records");
  }
  const std::vector<std::size_t> order = ShuffledOrder(corpus.size(), spec.seed);
  std::vector<Split> assignment(corpus.size(), Split::kNone);
  std::size_t next = 0;
  for (const auto& [split, n] : spec.counts) {
    for (int k = 0; k < n; ++k) assignment[order[next++]] = split;
  }
  return assignment;
}

std::vector<std::string> WriteSplitFiles(const std::string& dir,
                                         std::span<const TrainingExample> corpus,
                                         std::span<const Split> assignment, const SplitSpec& spec) {
  if (assignment.size() != corpus.size()) {
    throw Error(ErrorCode::kSizeMismatch, "assignment does not match corpus size");
  }
  fs::create_directories(dir);
  const std::vector<std::size_t> order = ShuffledOrder(corpus.size(), spec.seed);
  std::vector<std::string> paths;
  for (const auto& [split, n] : spec.counts) {
    std::vector<TrainingExample> rows;
    for (std::size_t idx : order) {
      if (assignment[idx] != split) continue;
      TrainingExample ex = corpus[idx];
      ex.split = split;
      rows.push_back(std::move(ex));
    }
    const std::string path = (fs::path(dir) / (std::string(ToString(split)) + ".jsonl")).string();
    WriteCorpus(path, rows);
    paths.push_back(path);
  }
  return paths;
}

std::string_view ToString(PaperType t) {
  switch (t) {
    case PaperType::kSurvey: return "survey";
    case PaperType::kNewIdea: return "new_idea";
    case PaperType::kEvaluation: return "evaluation";
  }
  return "?";
}

void to_json(Json& j, const PaperClassification& c) {
  j = Json{{"paper_id", c.paper_id},
           {"paper_type", ToString(c.paper_type)},
           {"reasoning", c.reasoning}};
}

PaperClassification ParseClassification(std::string_view text) {
  return AsParseFailure([&] {
    const Json obj = ExtractJsonObject(text, JsonPick::kLast);
    const std::string type = RequireStringKey(obj, "paper_type");
    PaperClassification c;
    if (type == "survey") {
      c.paper_type = PaperType::kSurvey;
    } else if (type == "new_idea") {
      c.paper_type = PaperType::kNewIdea;
    } else if (type == "evaluation") {
      c.paper_type = PaperType::kEvaluation;
    } else {
      throw Error(ErrorCode::kParseFailure, "paper_type '" + type + "' is not a known type");
    }
    // The reasoning is the prose ahead of the final answer.
    const std::size_t key = text.rfind("paper_type");
    const std::size_t brace = key == std::string_view::npos ? key : text.rfind('{', key);
    std::string_view prose = brace == std::string_view::npos ? text : text.substr(0, brace);
    if (const std::size_t fence = prose.rfind("```");
        fence != std::string_view::npos && Trim(prose.substr(fence)).find('\n') ==
                                               std::string::npos) {
      prose = prose.substr(0, fence);
    }
    c.reasoning = Trim(prose);
    return c;
  });
}

PaperClassification ClassifyPaper(const std::string& paper_id, const std::string& title,
                                  const std::string& abstract, Backend& backend,
                                  const PrepOptions& opts) {
  PaperClassification c = Ask(backend, opts, "classifier",
                              {{"title", title}, {"abstract", abstract}}, paper_id,
                              [](const std::string& t) { return ParseClassification(t); });
  c.paper_id = paper_id;
  return c;
}

QuestionExtraction ParseQuestionExtraction(std::string_view text) {
  return AsParseFailure([&] {
    const Json obj = ExtractJsonObject(text, JsonPick::kLast);
    QuestionExtraction q;
    q.research_question = Trim(RequireStringKey(obj, "research_question"));
    q.reasoning = RequireStringKey(obj, "reasoning");
    if (q.research_question.empty()) {
      throw Error(ErrorCode::kParseFailure, "research_question is empty");
    }
    static const std::set<std::string> kInterrogatives = {
        "how", "what", "which", "is", "are", "can", "could", "does",
        "do",  "why",  "when",  "where", "should", "would", "will"};
    if (WordCount(q.research_question) > 20) q.warnings.push_back("too-long");
    if (!kInterrogatives.count(FirstWordLower(q.research_question))) {
      q.warnings.push_back("non-interrogative-start");
    }
    if (q.research_question.back() != '?') q.warnings.push_back("no-question-mark");
    return q;
  });
}

QuestionExtraction ExtractResearchQuestion(const std::string& paper_id, const std::string& title,
                                           const std::string& abstract, Backend& backend,
                                           const PrepOptions& opts) {
  return Ask(backend, opts, "rq_generator", {{"title", title}, {"abstract", abstract}}, paper_id,
             [](const std::string& t) { return ParseQuestionExtraction(t); });
}

std::size_t SentenceCount(std::string_view text) {
  static const std::regex kEnd(R"([.!?]+(\s+|$))");
  static const std::regex kAbbrev(R"(\b(e\.g|i\.e|et al|etc|vs|cf)\.)", std::regex::icase);
  const std::string cleaned = std::regex_replace(std::string(Trim(text)), kAbbrev, "$1");
  if (cleaned.empty()) return 0;
  std::size_t n = std::distance(std::sregex_iterator(cleaned.begin(), cleaned.end(), kEnd),
                                std::sregex_iterator());
  const char last = cleaned.back();
  if (last != '.' && last != '!' && last != '?') ++n;
  return n;
}

GoldenIdea ParseGoldenIdea(std::string_view text) {
  return AsParseFailure([&] {
    const Json obj = ExtractJsonObject(text, JsonPick::kLast);
    GoldenIdea g;
    g.research_question = Trim(RequireStringKey(obj, "research_question"));
    g.reasoning = Trim(RequireStringKey(obj, "reasoning"));
    g.method = Trim(RequireStringKey(obj, "method"));
    if (g.research_question.empty() || g.method.empty()) {
      throw Error(ErrorCode::kParseFailure, "empty research_question or method");
    }
    static const std::regex kReference(
        R"(\b(section|sec\.|figure|fig\.|table|tab\.|equation|eq\.|definition|def\.|page|p\.)\s*\(?\d)",
        std::regex::icase);
    if (std::regex_search(g.reasoning, kReference)) g.warnings.push_back("prohibited-reference");
    if (SentenceCount(g.reasoning) > 2) g.warnings.push_back("too-many-sentences");
    if (g.research_question.back() != '?') g.warnings.push_back("no-question-mark");
    return g;
  });
}

GoldenIdea ExtractGoldenIdea(const std::string& paper_id, const std::string& full_text,
                             Backend& backend, const PrepOptions& opts) {
  return Ask(backend, opts, "idea_extractor", {{"paper", full_text}}, paper_id,
             [](const std::string& t) { return ParseGoldenIdea(t); });
}

GenerationParse ParseGeneration(std::string_view text) {
  GenerationParse g;
  g.answer = std::string(text);
  if (CountTag(text, "<reasoning>") != 1 || CountTag(text, "</reasoning>") != 1 ||
      CountTag(text, "<answer>") != 1 || CountTag(text, "</answer>") != 1) {
    return g;
  }
  const std::size_t r0 = text.find("<reasoning>"), r1 = text.find("</reasoning>");
  const std::size_t a0 = text.find("<answer>"), a1 = text.find("</answer>");
  if (!(r0 < r1 && r1 < a0 && a0 < a1)) return g;
  const bool clean = Trim(text.substr(0, r0)).empty() &&
                     Trim(text.substr(r1 + 12, a0 - r1 - 12)).empty() &&
                     Trim(text.substr(a1 + 9)).empty();
  if (!clean) return g;
  g.reasoning = Trim(text.substr(r0 + 11, r1 - r0 - 11));
  g.answer = Trim(text.substr(a0 + 8, a1 - a0 - 8));
  g.format_ok = true;
  return g;
}

}  // namespace ideagrpo
