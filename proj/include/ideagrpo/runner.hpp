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


#ifndef IDEAGRPO_RUNNER_HPP_
#define IDEAGRPO_RUNNER_HPP_

#include <string>

#include "ideagrpo/domain.hpp"

namespace ideagrpo {

// Exit status conventions shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct CommandResult {
  int exit_code = kExitOk;
  std::string out;
  std::string err;
};

// Runs one operator command described as JSON:
//   {"command": "train"|"judge"|"eval"|"ablate"|"data"|"prompts",
//    "config": path?, "seed": n?, "backend": kind?, "arch": name|path?,
//    "parallelism": n?, "out": dir?, ...command arguments}
// Never throws; failures are reported through exit_code and err.
CommandResult RunCommand(const Json& command);

}  // namespace ideagrpo

#endif  // IDEAGRPO_RUNNER_HPP_
