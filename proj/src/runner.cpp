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

#include "ideagrpo/runner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "ideagrpo/backend.hpp"
#include "ideagrpo/datapipe.hpp"
#include "ideagrpo/error.hpp"
#include "ideagrpo/evalharness.hpp"
#include "ideagrpo/grpo.hpp"
#include "ideagrpo/judge.hpp"
#include "ideagrpo/jsonext.hpp"
#include "ideagrpo/policy.hpp"
#include "ideagrpo/prompts.hpp"
#include "ideagrpo/toytask.hpp"

namespace ideagrpo {

namespace {

namespace fs = std::filesystem;

// A problem with the invocation itself (exit 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string ReadText(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError(std::string(what) + " not found: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

Json ParseJsonText(const std::string& text, const std::string& origin) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw UsageError(origin + " is not valid JSON");
  return j;
}

// Non-empty lines of a JSONL file, parsed.
std::vector<Json> ReadJsonl(const std::string& path, const char* what) {
  const std::string text = ReadText(path, what);
  std::vector<Json> rows;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw Error(ErrorCode::kMalformed, path + " line " + std::to_string(line_no));
    }
    rows.push_back(std::move(j));
  }
  return rows;
}

// Either a single JSON value or JSONL.
std::vector<Json> ReadJsonOrJsonl(const std::string& path, const char* what) {
  const std::string text = ReadText(path, what);
  Json whole = Json::parse(text, nullptr, false);
  if (!whole.is_discarded()) {
    if (whole.is_array()) return whole.get<std::vector<Json>>();
    return {whole};
  }
  return ReadJsonl(path, what);
}

struct Context {
  Json cmd;
  Json config = Json::object();
  std::uint64_t seed = 0;
  int parallelism = 1;
  fs::path out_dir = ".";

  std::string Path(const char* key) const {
    const Json paths = config.value("paths", Json::object());
    return paths.value(key, std::string());
  }
  std::string Arg(const char* key) const { return cmd.value(key, std::string()); }
};

Context MakeContext(const Json& cmd) {
  Context ctx;
  ctx.cmd = cmd;
  if (const std::string cfg = cmd.value("config", std::string()); !cfg.empty()) {
    ctx.config = ParseJsonText(ReadText(cfg, "config"), cfg);
    if (!ctx.config.is_object()) throw UsageError("config must be a JSON object");
  }
  ctx.seed = ctx.config.value("seed", std::uint64_t{0});
  if (cmd.contains("seed") && !cmd["seed"].is_null()) ctx.seed = cmd["seed"].get<std::uint64_t>();
  ctx.parallelism = ctx.config.value("parallelism", 1);
  if (cmd.contains("parallelism") && !cmd["parallelism"].is_null()) {
    ctx.parallelism = cmd["parallelism"].get<int>();
  }
  if (ctx.parallelism < 1) throw UsageError("parallelism must be >= 1");
  std::string out = ctx.Path("out");
  if (const std::string o = cmd.value("out", std::string()); !o.empty()) out = o;
  ctx.out_dir = out.empty() ? fs::path(".") : fs::path(out);
  return ctx;
}

std::shared_ptr<Backend> SelectBackend(const Context& ctx) {
  Json spec = ctx.config.value("backend", Json());
  const std::string kind = ctx.Arg("backend");
  if (!kind.empty()) {
    if (kind != "http" && kind != "scripted" && kind != "replay") {
      throw UsageError("unknown backend '" + kind + "'");
    }
    const Json named = ctx.config.value("backends", Json::object());
    if (named.contains(kind)) {
      spec = named[kind];
    } else if (kind == "replay" && !(spec.is_object() && spec.value("kind", "") == "replay")) {
      std::string cache = ctx.Path("cache");
      if (cache.empty()) cache = (ctx.out_dir / "cache").string();
      spec = Json{{"kind", "replay"}, {"cache_dir", cache}, {"fallback", spec}};
    } else if (!spec.is_object() || spec.value("kind", "") != kind) {
      throw UsageError("no " + kind + " backend configured");
    }
  }
  if (!spec.is_object()) throw UsageError("no backend configured");
  return MakeBackend(spec);
}

PromptLibrary LoadPrompts(const Context& ctx) {
  const std::string dir = ctx.Path("prompts");
  return dir.empty() ? PromptLibrary::Defaults() : PromptLibrary::LoadOverrides(dir);
}

JudgeArchitecture ResolveArch(const std::string& spec) {
  if (fs::is_regular_file(spec)) {
    return ParseArchitecture(ParseJsonText(ReadText(spec, "architecture"), spec));
  }
  try {
    return NamedArchitecture(spec);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

Judge MakeJudge(const Context& ctx) {
  const Json jcfg = ctx.config.value("judge", Json::object());
  Judge judge;
  judge.prompts = LoadPrompts(ctx);
  judge.strategy = ParseJudgeStrategy(jcfg.value("strategy", std::string("multi_agent")));
  if (jcfg.contains("arch")) judge.arch = ParseArchitecture(jcfg["arch"]);
  if (const std::string a = ctx.Arg("arch"); !a.empty()) judge.arch = ResolveArch(a);
  if (jcfg.contains("options")) judge.options = jcfg["options"].get<JudgeOptions>();
  return judge;
}

EvalOptions MakeEvalOptions(const Context& ctx) {
  const Json e = ctx.config.value("eval", Json::object());
  EvalOptions o;
  o.prompts = LoadPrompts(ctx);
  o.retries = e.value("retries", o.retries);
  o.temperature = e.value("temperature", o.temperature);
  o.max_tokens = e.value("max_tokens", o.max_tokens);
  o.model = e.value("model", o.model);
  o.parallelism = ctx.parallelism;
  return o;
}

// ---- train ----

CommandResult CmdTrain(const Context& ctx) {
  CommandResult res;
  GrpoConfig cfg = ctx.config.value("grpo", Json::object()).get<GrpoConfig>();
  cfg.seed = ctx.seed;
  try {
    cfg.Validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const ToyTaskConfig task = ctx.config.value("task", Json::object()).get<ToyTaskConfig>();

  std::vector<TrainingExample> corpus;
  if (const std::string path = ctx.Path("corpus"); !path.empty()) {
    if (!fs::is_regular_file(path)) throw UsageError("corpus not found: " + path);
    corpus = LoadCorpus(path);
    const bool has_splits = std::any_of(corpus.begin(), corpus.end(),
                                        [](const auto& ex) { return ex.split != Split::kNone; });
    if (has_splits) {
      std::erase_if(corpus, [](const auto& ex) { return ex.split != Split::kRlTrain; });
    }
  } else {
    corpus = ToyCorpus(task.corpus_size);
  }
  if (corpus.empty()) throw UsageError("training corpus is empty");

  PolicyParams policy = task.MakePolicy(ctx.seed);

  const Json train = ctx.config.value("train", Json::object());
  const long per_epoch = (static_cast<long>(corpus.size()) + cfg.batch_size - 1) / cfg.batch_size;
  long steps = cfg.total_steps > 0 ? cfg.total_steps : cfg.epochs * per_epoch;
  steps = train.value("steps", steps);
  if (steps < 1) throw UsageError("train.steps must be >= 1");
  const long checkpoint_every = train.value("checkpoint_every", 0L);

  const std::string reward_kind = ctx.config.value("reward", std::string("toy_target"));
  RewardFn reward;
  std::shared_ptr<Backend> backend;
  std::mutex transcript_mu;
  std::ofstream transcripts;
  if (reward_kind == "toy_target") {
    reward = TargetSubsequenceTask{task.target, task.eos}.MakeReward();
  } else if (reward_kind == "judge") {
    backend = SelectBackend(ctx);
    fs::create_directories(ctx.out_dir);
    transcripts.open(ctx.out_dir / "transcripts.jsonl", std::ios::trunc);
    reward = MakeJudgeReward(backend, MakeJudge(ctx), ctx.parallelism,
                             [&](const JudgeCase& jc, const DebateResult& r) {
                               std::lock_guard lock(transcript_mu);
                               transcripts << Json{{"case_id", jc.id},
                                                   {"verdict", r.verdict},
                                                   {"transcript", r.transcript}}
                                                  .dump()
                                           << "\n";
                             });
  } else {
    throw UsageError("unknown reward '" + reward_kind + "'");
  }

  Trainer trainer(std::move(policy), cfg, ToyPromptFn(task.prompt_tokens), reward, steps);
  trainer.set_rollout_hook([](Rollout& r) {
    const GenerationParse g = ParseGeneration(r.text);
    r.answer = g.answer;
    r.reasoning = g.reasoning;
  });

  fs::create_directories(ctx.out_dir);
  std::ofstream log(ctx.out_dir / "train_log.jsonl", std::ios::trunc);
  if (!log) throw Error(ErrorCode::kIo, "cannot write train log");
  Json curve = Json::array(), clips = Json::array();
  long ok_groups = 0, failed_groups = 0;
  std::vector<TrainingExample> batch;
  for (long s = 0; s < steps; ++s) {
    batch.clear();
    for (int b = 0; b < cfg.batch_size; ++b) {
      batch.push_back(corpus[static_cast<std::size_t>((s * cfg.batch_size + b) %
                                                      static_cast<long>(corpus.size()))]);
    }
    const StepStats st = trainer.TrainStep(batch);
    log << Json(st).dump() << "\n";
    curve.push_back(st.mean_reward);
    clips.push_back(st.clip_fraction);
    ok_groups += st.groups;
    failed_groups += st.failed_groups;
    if (checkpoint_every > 0 && (s + 1) % checkpoint_every == 0) {
      WriteText(ctx.out_dir / "checkpoints" / ("step_" + std::to_string(s + 1) + ".json"),
                trainer.CheckpointJson().dump());
    }
  }
  SavePolicy(trainer.policy(), (ctx.out_dir / "policy.json").string());
  WriteText(ctx.out_dir / "trainer_checkpoint.json", trainer.CheckpointJson().dump());

  const std::size_t tail = std::min<std::size_t>(10, curve.size());
  double tail_sum = 0;
  for (std::size_t i = curve.size() - tail; i < curve.size(); ++i) tail_sum += curve[i].get<double>();
  Json summary{{"steps", steps},
               {"initial_mean_reward", curve.front()},
               {"final_mean_reward", tail_sum / static_cast<double>(tail)},
               {"kl_coefficient", cfg.kl_coefficient},
               {"groups", ok_groups},
               {"failed_groups", failed_groups}};
  Json full = summary;
  full["mean_reward_curve"] = curve;
  full["clip_fractions"] = clips;
  WriteText(ctx.out_dir / "summary.json", full.dump(2) + "\n");
  res.out = summary.dump() + "\n";
  if (ok_groups == 0) {
    res.exit_code = kExitFailure;
    res.err = "every group failed to obtain rewards\n";
  }
  return res;
}

// ---- judge ----

CommandResult CmdJudge(const Context& ctx) {
  CommandResult res;
  const std::string case_path = ctx.Arg("case");
  if (case_path.empty()) throw UsageError("judge needs --case FILE");
  Judge judge = MakeJudge(ctx);
  const std::vector<Json> rows = ReadJsonOrJsonl(case_path, "case file");
  std::vector<JudgeCase> cases;
  for (const Json& row : rows) {
    try {
      cases.push_back(row.get<JudgeCase>());
    } catch (const std::exception& e) {
      throw UsageError(std::string("invalid case: ") + e.what());
    }
  }
  auto backend = SelectBackend(ctx);
  std::string transcripts;
  bool transport_failure = false;
  for (const JudgeCase& jc : cases) {
    DebateResult r;
    try {
      r = judge.Run(jc, *backend);
    } catch (const DebateError& e) {
      r.verdict = Verdict::Reject(std::string("backend failure: ") + e.what(), "backend-error");
      r.transcript = e.partial();
      transport_failure = true;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kInvalidArgument || e.code() == ErrorCode::kMissingSlot) throw;
      r.verdict = Verdict::Reject(std::string("backend failure: ") + e.what(), "backend-error");
      transport_failure = true;
    }
    Json v = r.verdict;
    v["case_id"] = jc.id;
    res.out += v.dump(2) + "\n";
    transcripts += Json{{"case_id", jc.id},
                        {"architecture", judge.arch},
                        {"strategy", ToString(judge.strategy)},
                        {"verdict", r.verdict},
                        {"transcript", r.transcript}}
                       .dump() +
                   "\n";
  }
  WriteText(ctx.out_dir / "transcripts.jsonl", transcripts);
  if (transport_failure) {
    res.exit_code = kExitFailure;
    res.err = "one or more debates failed at the backend; verdicts were rejected\n";
  }
  return res;
}

// ---- eval ----

CommandResult CmdEval(const Context& ctx) {
  CommandResult res;
  const std::string mode = ctx.Arg("mode");
  const std::string input = ctx.Arg("input");
  const std::string dataset = ctx.cmd.value("dataset", std::string("dataset"));
  if (input.empty()) throw UsageError("eval needs --input FILE");
  const EvalOptions opts = MakeEvalOptions(ctx);

  if (mode == "absolute" || mode == "pairwise") {
    std::vector<IdeaRecord> records;
    for (const Json& row : ReadJsonl(input, "idea file")) records.push_back(row.get<IdeaRecord>());
    if (records.empty()) throw UsageError("idea file is empty");
    auto backend = SelectBackend(ctx);
    if (mode == "absolute") {
      const AbsoluteSummary s = AbsoluteEvalAll(records, *backend, opts);
      const std::string csv = AbsoluteCsv(dataset, s);
      WriteText(ctx.out_dir / "absolute.csv", csv);
      WriteText(ctx.out_dir / "absolute.json", AbsoluteJson(dataset, s).dump(2) + "\n");
      res.out = csv;
      int scored = 0;
      for (const auto& [_, n] : s.scored) scored += n;
      if (scored == 0) {
        res.exit_code = kExitFailure;
        res.err = "every absolute judgment failed\n";
      }
      return res;
    }
    std::map<std::string, PairwiseQuestion> by_question;
    std::vector<std::string> order;
    for (const IdeaRecord& r : records) {
      auto [it, fresh] = by_question.try_emplace(r.question.id);
      if (fresh) {
        it->second.question = r.question;
        order.push_back(r.question.id);
      }
      if (!it->second.ideas.emplace(r.method, r.idea).second) {
        throw UsageError("duplicate method '" + r.method + "' for question " + r.question.id);
      }
    }
    std::vector<PairwiseQuestion> questions;
    for (const std::string& id : order) questions.push_back(by_question.at(id));
    const TournamentResult t = PairwiseTournament(questions, *backend, opts);
    const std::string csv = TournamentCsv(dataset, t);
    WriteText(ctx.out_dir / "pairwise.csv", csv);
    WriteText(ctx.out_dir / "pairwise.json", TournamentJson(dataset, t).dump(2) + "\n");
    res.out = csv;
    if (!t.failures.empty()) {
      res.err = std::to_string(t.failures.size()) + " of " + std::to_string(t.presentations) +
                " pairwise presentations failed and were excluded\n";
    }
    if (t.judgments.empty()) res.exit_code = kExitFailure;
    return res;
  }

  if (mode == "bon") {
    auto backend = SelectBackend(ctx);
    std::string lines;
    for (const Json& row : ReadJsonl(input, "candidate file")) {
      ResearchQuestion q;
      const Json& qj = RequireKey(row, "question");
      if (qj.is_string()) {
        q = {row.value("question_id", row.value("id", std::string())), qj.get<std::string>(),
             Source::kSynthetic};
      } else {
        q = qj.get<ResearchQuestion>();
      }
      const auto candidates = RequireKey(row, "candidates").get<std::vector<std::string>>();
      const BonResult r = BestOfN(q, candidates, *backend, opts);
      Json out = r;
      out["question_id"] = q.id;
      lines += out.dump() + "\n";
      res.out += q.id + " winner_index=" + std::to_string(r.winner_index) +
                 " winner_id=" + r.winner_id;
      for (const std::string& f : r.flags) res.out += " [" + f + "]";
      res.out += "\n";
    }
    WriteText(ctx.out_dir / "bon.jsonl", lines);
    return res;
  }
  throw UsageError("eval mode must be absolute, pairwise or bon");
}

// ---- ablate ----

std::vector<JudgeArchitecture> ReadArchList(const std::string& spec) {
  std::vector<JudgeArchitecture> archs;
  if (fs::is_regular_file(spec)) {
    const std::string text = ReadText(spec, "architecture list");
    Json j = Json::parse(text, nullptr, false);
    if (!j.is_discarded()) {
      if (!j.is_array()) throw UsageError("architecture list must be a JSON array");
      for (const Json& a : j) archs.push_back(ParseArchitecture(a));
      return archs;
    }
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (!Trim(line).empty() && Trim(line)[0] != '#') archs.push_back(ResolveArch(Trim(line)));
    }
    return archs;
  }
  std::istringstream in(spec);
  std::string name;
  while (std::getline(in, name, ',')) {
    if (!Trim(name).empty()) archs.push_back(ResolveArch(Trim(name)));
  }
  return archs;
}

CommandResult CmdAblate(const Context& ctx) {
  CommandResult res;
  const std::string labeled_path = ctx.Arg("labeled");
  if (labeled_path.empty()) throw UsageError("ablate needs --labeled FILE");
  std::string arch_spec = ctx.Arg("archs");
  if (arch_spec.empty()) arch_spec = ctx.Arg("arch");
  if (arch_spec.empty()) throw UsageError("ablate needs --archs FILE|LIST");
  std::vector<JudgeArchitecture> archs = ReadArchList(arch_spec);
  if (archs.empty()) throw UsageError("no architectures to ablate");
  const bool delta = ctx.cmd.value("delta", true);
  if (delta && std::none_of(archs.begin(), archs.end(),
                            [](const auto& a) { return a.name == "ordinary"; })) {
    archs.insert(archs.begin(), NamedArchitecture("ordinary"));
  }
  const int repeats = ctx.cmd.value("repeats", 1);
  if (repeats < 1) throw UsageError("repeats must be >= 1");

  std::vector<LabeledCase> cases;
  for (const Json& row : ReadJsonl(labeled_path, "labeled set")) {
    try {
      cases.push_back(row.get<LabeledCase>());
    } catch (const std::exception& e) {
      throw UsageError(std::string("invalid labeled case: ") + e.what());
    }
  }
  if (cases.empty()) throw UsageError("labeled set is empty");

  Context judge_ctx = ctx;
  judge_ctx.cmd.erase("arch");
  const Judge base = MakeJudge(judge_ctx);
  auto backend = SelectBackend(ctx);
  const auto reports = AblationRun(archs, cases, *backend, repeats, base, ctx.parallelism);
  const std::string csv = AblationCsv(reports);
  WriteText(ctx.out_dir / "ablation.csv", csv);
  WriteText(ctx.out_dir / "ablation.json", AblationJson(reports).dump(2) + "\n");
  res.out = csv;
  if (delta) {
    const std::string dcsv = AblationDeltaCsv(reports);
    WriteText(ctx.out_dir / "ablation_delta.csv", dcsv);
    res.out += "\n" + dcsv;
  }
  int failures = 0;
  for (const auto& r : reports) failures += r.failures;
  if (failures > 0) res.err = std::to_string(failures) + " debates failed and were scored 0\n";
  if (failures == static_cast<int>(cases.size() * archs.size()) * repeats) {
    res.exit_code = kExitFailure;
  }
  return res;
}

// ---- data ----

CommandResult CmdDataSplit(const Context& ctx) {
  CommandResult res;
  std::string corpus_path = ctx.Arg("corpus");
  if (corpus_path.empty()) corpus_path = ctx.Path("corpus");
  if (corpus_path.empty()) throw UsageError("data split needs --corpus FILE");
  if (!fs::is_regular_file(corpus_path)) throw UsageError("corpus not found: " + corpus_path);
  std::vector<TrainingExample> corpus = LoadCorpus(corpus_path);
  if (ctx.cmd.contains("min_score") && !ctx.cmd["min_score"].is_null()) {
    corpus = FilterByScore(corpus, ctx.cmd["min_score"].get<double>());
  }
  SplitSpec spec = SplitSpec::Standard();
  if (const std::string sp = ctx.Arg("spec"); !sp.empty()) {
    spec = ParseJsonText(ReadText(sp, "split spec"), sp).get<SplitSpec>();
  } else if (ctx.config.contains("splits")) {
    spec = ctx.config["splits"].get<SplitSpec>();
  }
  spec.seed = ctx.seed;
  std::vector<Split> assignment;
  try {
    assignment = MakeSplits(corpus, spec);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInsufficientCorpus) throw UsageError(e.what());
    throw;
  }
  WriteSplitFiles(ctx.out_dir.string(), corpus, assignment, spec);
  for (const auto& [split, n] : spec.counts) {
    res.out += std::string(ToString(split)) + " " + std::to_string(n) + "\n";
  }
  return res;
}

CommandResult CmdDataPrepare(const Context& ctx) {
  CommandResult res;
  const std::string input = ctx.Arg("input");
  if (input.empty()) throw UsageError("data prepare needs --input FILE");
  const std::vector<Json> rows = ReadJsonl(input, "paper file");
  auto backend = SelectBackend(ctx);
  PrepOptions opts;
  opts.prompts = LoadPrompts(ctx);
  const Json pcfg = ctx.config.value("prepare", Json::object());
  opts.retries = pcfg.value("retries", opts.retries);
  opts.temperature = pcfg.value("temperature", opts.temperature);
  opts.max_tokens = pcfg.value("max_tokens", opts.max_tokens);
  opts.model = pcfg.value("model", opts.model);

  std::string classifications, corpus, golden, warnings;
  int ok = 0, kept = 0;
  for (const Json& row : rows) {
    const std::string id = RequireStringKey(row, "id");
    const std::string title = row.value("title", std::string());
    const std::string abstract = RequireStringKey(row, "abstract");
    auto warn = [&](const std::string& stage, const Json& detail) {
      warnings += Json{{"id", id}, {"stage", stage}, {"detail", detail}}.dump() + "\n";
    };
    try {
      const PaperClassification c = ClassifyPaper(id, title, abstract, *backend, opts);
      classifications += Json(c).dump() + "\n";
      ++ok;
      if (c.paper_type != PaperType::kNewIdea) continue;
      const QuestionExtraction q = ExtractResearchQuestion(id, title, abstract, *backend, opts);
      if (!q.warnings.empty()) warn("research_question", q.warnings);
      TrainingExample ex;
      ex.question = {id, q.research_question,
                     ParseSource(row.value("source", std::string("synthetic")))};
      ex.golden = {id, abstract};
      if (row.contains("score") && row["score"].is_number()) ex.score = row["score"].get<double>();
      corpus += ToCorpusLine(ex).dump() + "\n";
      ++kept;
      if (row.contains("text") && row["text"].is_string()) {
        const GoldenIdea g = ExtractGoldenIdea(id, row["text"].get<std::string>(), *backend, opts);
        if (!g.warnings.empty()) warn("golden_idea", g.warnings);
        golden += Json{{"id", id},
                       {"research_question", g.research_question},
                       {"reasoning", g.reasoning},
                       {"method", g.method}}
                      .dump() +
                  "\n";
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kMissingSlot) throw;
      warn("error", e.what());
    }
  }
  WriteText(ctx.out_dir / "classifications.jsonl", classifications);
  WriteText(ctx.out_dir / "corpus.jsonl", corpus);
  WriteText(ctx.out_dir / "golden_ideas.jsonl", golden);
  WriteText(ctx.out_dir / "warnings.jsonl", warnings);
  res.out = "classified " + std::to_string(ok) + " of " + std::to_string(rows.size()) +
            ", kept " + std::to_string(kept) + " new_idea records\n";
  if (ok == 0 && !rows.empty()) res.exit_code = kExitFailure;
  return res;
}

CommandResult CmdPrompts(const Context& ctx) {
  LoadPrompts(ctx).Dump(ctx.out_dir.string());
  CommandResult res;
  res.out = "wrote prompt templates to " + ctx.out_dir.string() + "\n";
  return res;
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kMissingSlot:
    case ErrorCode::kMalformed:
    case ErrorCode::kDuplicateId:
    case ErrorCode::kInsufficientCorpus:
    case ErrorCode::kAuthMissing:
      return kExitUsage;
    default:
      return kExitFailure;
  }
}

}  // namespace

CommandResult RunCommand(const Json& command) {
  try {
    if (!command.is_object()) throw UsageError("command must be a JSON object");
    const Context ctx = MakeContext(command);
    const std::string name = command.value("command", std::string());
    if (name == "train") return CmdTrain(ctx);
    if (name == "judge") return CmdJudge(ctx);
    if (name == "eval") return CmdEval(ctx);
    if (name == "ablate") return CmdAblate(ctx);
    if (name == "prompts") return CmdPrompts(ctx);
    if (name == "data") {
      const std::string sub = command.value("sub", std::string());
      if (sub == "split") return CmdDataSplit(ctx);
      if (sub == "prepare") return CmdDataPrepare(ctx);
      throw UsageError("data subcommand must be split or prepare");
    }
    throw UsageError("unknown command '" + name + "'");
  } catch (const UsageError& e) {
    return {kExitUsage, "", std::string(e.what()) + "\n"};
  } catch (const Error& e) {
    return {ExitCodeFor(e.code()), "", std::string(e.what()) + "\n"};
  } catch (const Json::exception& e) {
    return {kExitUsage, "", std::string("invalid configuration: ") + e.what() + "\n"};
  } catch (const std::exception& e) {
    return {kExitFailure, "", std::string(e.what()) + "\n"};
  }
}

}  // namespace ideagrpo
