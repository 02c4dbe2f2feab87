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

// Command-line front end. Talks to the library only through the C API.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ideagrpo_c.h"
#include "json.hpp"

namespace {

using Json = nlohmann::json;

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string backend;
  std::string arch;
  std::optional<int> parallelism;
  std::string out;
};

int Run(const Json& command) {
  int exit_code = 0;
  char* out = nullptr;
  char* err = nullptr;
  const std::string text = command.dump();
  if (igr_command_run(text.c_str(), &exit_code, &out, &err) != IGR_OK) {
    std::cerr << "error: " << igr_last_error() << "\n";
    return 1;
  }
  std::fputs(out, stdout);
  std::fputs(err, stderr);
  igr_string_free(out);
  igr_string_free(err);
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ideagrpo: Dr. GRPO training with a multi-agent debate judge"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config, "Run configuration JSON file");
  app.add_option("--seed", g.seed, "Global seed");
  app.add_option("--backend", g.backend, "Backend kind")
      ->check(CLI::IsMember({"http", "scripted", "replay"}));
  app.add_option("--arch", g.arch, "Judge architecture name or JSON file");
  app.add_option("--parallelism", g.parallelism, "Concurrent judgments")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output directory");

  Json cmd = Json::object();

  auto* train = app.add_subcommand("train", "Run the GRPO loop");

  auto* judge = app.add_subcommand("judge", "Judge cases and print verdicts");
  std::string case_path;
  judge->add_option("--case", case_path, "Case JSON or JSONL file")->required();

  auto* eval = app.add_subcommand("eval", "Absolute, pairwise or best-of-n evaluation");
  std::string mode, input, dataset = "dataset";
  eval->add_option("mode", mode, "absolute|pairwise|bon")
      ->required()
      ->check(CLI::IsMember({"absolute", "pairwise", "bon"}));
  eval->add_option("--input", input, "Idea or candidate JSONL file")->required();
  eval->add_option("--dataset", dataset, "Dataset label for the output tables");

  auto* ablate = app.add_subcommand("ablate", "Judge-architecture ablation");
  std::string archs, labeled;
  int repeats = 1;
  bool no_delta = false;
  ablate->add_option("--archs", archs, "Architecture list file or comma-separated names");
  ablate->add_option("--labeled", labeled, "Labeled cases JSONL")->required();
  ablate->add_option("--repeats", repeats, "Runs per architecture")->check(CLI::PositiveNumber);
  ablate->add_flag("--no-delta", no_delta, "Skip the delta-vs-ordinary table");

  auto* data = app.add_subcommand("data", "Dataset preparation");
  data->require_subcommand(1);
  auto* split = data->add_subcommand("split", "Write split files");
  std::string corpus, spec;
  std::optional<double> min_score;
  split->add_option("--corpus", corpus, "Corpus JSONL");
  split->add_option("--spec", spec, "Split spec JSON");
  split->add_option("--min-score", min_score, "Keep records scoring at least this");
  auto* prepare = data->add_subcommand("prepare", "Classify papers and extract questions");
  std::string papers;
  prepare->add_option("--input", papers, "Paper JSONL (id, title, abstract, text?)")->required();

  auto* prompts = app.add_subcommand("prompts", "Write the prompt templates to --out");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (!g.config.empty()) cmd["config"] = g.config;
  if (g.seed) cmd["seed"] = *g.seed;
  if (!g.backend.empty()) cmd["backend"] = g.backend;
  if (!g.arch.empty()) cmd["arch"] = g.arch;
  if (g.parallelism) cmd["parallelism"] = *g.parallelism;
  if (!g.out.empty()) cmd["out"] = g.out;

  if (train->parsed()) {
    cmd["command"] = "train";
  } else if (judge->parsed()) {
    cmd["command"] = "judge";
    cmd["case"] = case_path;
  } else if (eval->parsed()) {
    cmd["command"] = "eval";
    cmd["mode"] = mode;
    cmd["input"] = input;
    cmd["dataset"] = dataset;
  } else if (ablate->parsed()) {
    cmd["command"] = "ablate";
    if (!archs.empty()) cmd["archs"] = archs;
    cmd["labeled"] = labeled;
    cmd["repeats"] = repeats;
    cmd["delta"] = !no_delta;
  } else if (data->parsed()) {
    cmd["command"] = "data";
    if (split->parsed()) {
      cmd["sub"] = "split";
      if (!corpus.empty()) cmd["corpus"] = corpus;
      if (!spec.empty()) cmd["spec"] = spec;
      if (min_score) cmd["min_score"] = *min_score;
    } else {
      cmd["sub"] = "prepare";
      cmd["input"] = papers;
    }
  } else if (prompts->parsed()) {
    cmd["command"] = "prompts";
  }
  return Run(cmd);
}
