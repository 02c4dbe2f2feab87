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

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "ideagrpo/datapipe.hpp"
#include "ideagrpo/error.hpp"
#include "test_util.hpp"

namespace ideagrpo {
namespace {

namespace fs = std::filesystem;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvalidArgument;
}

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string CorpusText(int n) {
  std::string out;
  for (const TrainingExample& ex : testing::FixtureCorpus(n)) out += ToCorpusLine(ex).dump() + "\n";
  return out;
}

TEST(CorpusTest, ParsesValidLines) {
  const auto corpus = ParseCorpus(CorpusText(400));
  EXPECT_EQ(corpus.size(), 400u);
  EXPECT_EQ(corpus[7].question.id, "paper-7");
  EXPECT_EQ(corpus[7].question.source, Source::kIclr2024);
  EXPECT_TRUE(corpus[7].score.has_value());
  EXPECT_EQ(ParseCorpus("\n" + CorpusText(2) + "\n\n").size(), 2u);
}

TEST(CorpusTest, MalformedNamesLine) {
  const std::string text = CorpusText(2) + R"({"id": "x", "abstract": "a"})" + "\n";
  try {
    ParseCorpus(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformed);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_EQ(CodeOf([] { ParseCorpus("not json\n"); }), ErrorCode::kMalformed);
}

TEST(CorpusTest, DuplicateIdRejected) {
  const std::string line = ToCorpusLine(testing::FixtureCorpus(1)[0]).dump() + "\n";
  EXPECT_EQ(CodeOf([&] { ParseCorpus(line + line); }), ErrorCode::kDuplicateId);
}

TEST(CorpusTest, FileRoundTripAndMissingFile) {
  const fs::path dir = fs::path(IGR_TEST_TMP) / "corpus_rt";
  fs::create_directories(dir);
  const auto corpus = testing::FixtureCorpus(10);
  WriteCorpus((dir / "c.jsonl").string(), corpus);
  EXPECT_EQ(LoadCorpus((dir / "c.jsonl").string()), corpus);
  EXPECT_EQ(CodeOf([&] { LoadCorpus((dir / "absent.jsonl").string()); }), ErrorCode::kIo);
}

TEST(CorpusTest, ScoreFilter) {
  const auto corpus = testing::FixtureCorpus(100);
  const auto kept = FilterByScore(corpus, 6.0);
  for (const auto& ex : kept) EXPECT_GE(*ex.score, 6.0);
  std::size_t expected = 0;
  for (const auto& ex : corpus) expected += *ex.score >= 6.0;
  EXPECT_EQ(kept.size(), expected);
}

TEST(SplitTest, StandardCounts) {
  const auto corpus = testing::FixtureCorpus(496);
  const SplitSpec spec = SplitSpec::Standard(7);
  EXPECT_EQ(spec.total(), 496);
  const auto a = MakeSplits(corpus, spec);
  std::map<Split, int> counts;
  for (Split s : a) counts[s]++;
  EXPECT_EQ(counts[Split::kRlTrain], 320);
  EXPECT_EQ(counts[Split::kRlVal], 40);
  EXPECT_EQ(counts[Split::kRlTest], 40);
  EXPECT_EQ(counts[Split::kSftTrain], 80);
  EXPECT_EQ(counts[Split::kSftVal], 16);
  EXPECT_EQ(counts[Split::kNone], 0);
  EXPECT_EQ(MakeSplits(corpus, spec), a);
  EXPECT_NE(MakeSplits(corpus, SplitSpec::Standard(8)), a);
}

TEST(SplitTest, Insufficient) {
  const auto corpus = testing::FixtureCorpus(400);
  EXPECT_EQ(CodeOf([&] { MakeSplits(corpus, SplitSpec::Standard()); }),
            ErrorCode::kInsufficientCorpus);
}

TEST(SplitTest, JsonSpecAndUnassigned) {
  const SplitSpec spec = Json::parse(R"({"seed": 3, "counts": {"rl_test": 2, "rl_train": 5}})")
                             .get<SplitSpec>();
  ASSERT_EQ(spec.counts.size(), 2u);
  EXPECT_EQ(spec.counts[0].first, Split::kRlTrain);
  EXPECT_EQ(spec.seed, 3u);
  const auto a = MakeSplits(testing::FixtureCorpus(10), spec);
  EXPECT_EQ(std::count(a.begin(), a.end(), Split::kNone), 3);
}

TEST(SplitTest, FilesAreDeterministicAndDisjoint) {
  const auto corpus = testing::FixtureCorpus(496);
  const SplitSpec spec = SplitSpec::Standard(11);
  const auto a = MakeSplits(corpus, spec);
  const fs::path d1 = fs::path(IGR_TEST_TMP) / "splits1";
  const fs::path d2 = fs::path(IGR_TEST_TMP) / "splits2";
  fs::remove_all(d1);
  fs::remove_all(d2);
  const auto p1 = WriteSplitFiles(d1.string(), corpus, a, spec);
  WriteSplitFiles(d2.string(), corpus, MakeSplits(corpus, spec), spec);
  ASSERT_EQ(p1.size(), 5u);
  std::set<std::string> ids;
  std::size_t total = 0;
  for (const std::string& path : p1) {
    const fs::path name = fs::path(path).filename();
    EXPECT_EQ(ReadFile(d1 / name), ReadFile(d2 / name));
    const auto split = ParseCorpus(ReadFile(path));
    for (const auto& ex : split) {
      ids.insert(ex.question.id);
      EXPECT_EQ(std::string(ToString(ex.split)) + ".jsonl", name.string());
    }
    total += split.size();
  }
  EXPECT_EQ(total, 496u);
  EXPECT_EQ(ids.size(), 496u);
}

TEST(ClassifierTest, Parsing) {
  const auto c = ParseClassification("The paper proposes a method.\n{\"paper_type\": \"new_idea\"}");
  EXPECT_EQ(c.paper_type, PaperType::kNewIdea);
  EXPECT_NE(c.reasoning.find("proposes a method"), std::string::npos);
  EXPECT_EQ(ParseClassification("```json\n{\"paper_type\": \"survey\"}\n```").paper_type,
            PaperType::kSurvey);
  EXPECT_EQ(CodeOf([] { ParseClassification(R"({"paper_type": "benchmark"})"); }),
            ErrorCode::kParseFailure);
  EXPECT_EQ(CodeOf([] { ParseClassification(R"({"type": "survey"})"); }),
            ErrorCode::kParseFailure);
  ScriptedBackend backend(Json{{"classifier", "Reasoning.\n{\"paper_type\": \"evaluation\"}"}});
  const auto r = ClassifyPaper("p1", "Title", "Abstract", backend);
  EXPECT_EQ(r.paper_type, PaperType::kEvaluation);
  EXPECT_EQ(r.paper_id, "p1");
}

TEST(QuestionTest, WorkedExampleAndWarnings) {
  const std::string example = R"({"reasoning": "The paper replaces hand features.",
    "research_question": "How can protein-ligand binding affinity be predicted more efficiently without hand-engineered features?"})";
  const auto q = ParseQuestionExtraction(example);
  EXPECT_EQ(q.research_question,
            "How can protein-ligand binding affinity be predicted more efficiently without "
            "hand-engineered features?");
  EXPECT_TRUE(q.warnings.empty());
  EXPECT_EQ(CodeOf([] { ParseQuestionExtraction(R"({"reasoning": "x"})"); }),
            ErrorCode::kParseFailure);
  std::string long_q = "How";
  for (int i = 0; i < 24; ++i) long_q += " word";
  long_q += "?";
  const auto w = ParseQuestionExtraction(Json{{"reasoning", "r"}, {"research_question", long_q}}.dump());
  EXPECT_EQ(w.warnings, (std::vector<std::string>{"too-long"}));
  const auto n = ParseQuestionExtraction(
      Json{{"reasoning", "r"}, {"research_question", "Predict binding affinity"}}.dump());
  EXPECT_EQ(n.warnings, (std::vector<std::string>{"non-interrogative-start", "no-question-mark"}));
}

TEST(GoldenIdeaTest, ParsingAndWarnings) {
  const Json ok = {{"research_question", "How can X improve Y?"},
                   {"reasoning", "Y is slow. X removes the bottleneck."},
                   {"method", "Use X."}};
  const auto g = ParseGoldenIdea(ok.dump());
  EXPECT_EQ(g.method, "Use X.");
  EXPECT_TRUE(g.warnings.empty());
  EXPECT_EQ(ParseGoldenIdea("```json\n" + ok.dump(2) + "\n```").research_question,
            "How can X improve Y?");
  Json ref = ok;
  ref["reasoning"] = "As shown in Section 3.1, X works.";
  EXPECT_EQ(ParseGoldenIdea(ref.dump()).warnings,
            (std::vector<std::string>{"prohibited-reference"}));
  Json wordy = ok;
  wordy["reasoning"] = "One. Two. Three.";
  EXPECT_EQ(ParseGoldenIdea(wordy.dump()).warnings,
            (std::vector<std::string>{"too-many-sentences"}));
  Json missing = ok;
  missing.erase("method");
  EXPECT_EQ(CodeOf([&] { ParseGoldenIdea(missing.dump()); }), ErrorCode::kParseFailure);
  ScriptedBackend backend(Json{{"idea_extractor", ok.dump()}});
  EXPECT_EQ(ExtractGoldenIdea("p1", "full text", backend).method, "Use X.");
}

TEST(SentenceCountTest, Abbreviations) {
  EXPECT_EQ(SentenceCount("One. Two! Three?"), 3u);
  EXPECT_EQ(SentenceCount("We use e.g. attention, cf. prior work. Done."), 2u);
  EXPECT_EQ(SentenceCount(""), 0u);
  EXPECT_EQ(SentenceCount("No terminal punctuation"), 1u);
}

TEST(GenerationParseTest, StrictFormat) {
  const auto ok = ParseGeneration("<reasoning> think </reasoning>\n<answer> idea </answer>");
  EXPECT_TRUE(ok.format_ok);
  EXPECT_EQ(ok.reasoning, "think");
  EXPECT_EQ(ok.answer, "idea");
  for (const char* bad : {"just an idea", "<answer>a</answer><reasoning>r</reasoning>",
                          "<reasoning>r</reasoning><answer>a</answer><answer>b</answer>",
                          "prefix <reasoning>r</reasoning><answer>a</answer>"}) {
    const auto g = ParseGeneration(bad);
    EXPECT_FALSE(g.format_ok) << bad;
    EXPECT_EQ(g.answer, bad);
    EXPECT_FALSE(g.reasoning.has_value());
  }
}

}  // namespace
}  // namespace ideagrpo
