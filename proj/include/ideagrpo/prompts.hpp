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

#ifndef IDEAGRPO_PROMPTS_HPP_
#define IDEAGRPO_PROMPTS_HPP_

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ideagrpo {

struct PromptPair {
  std::string system;
  std::string user;
};

// Named (system, user) template pairs. Slots are written {name}; only the
// names a caller passes to Render are substituted, so literal JSON braces in
// a template are left alone.
class PromptLibrary {
 public:
  // The shipped defaults: moderator, analyst, critic, evaluator,
  // single_judge, absolute, pairwise, bon, classifier, rq_generator,
  // idea_extractor, idea_generation.
  static PromptLibrary Defaults();

  // Defaults overridden by <dir>/<name>.system.txt and <dir>/<name>.user.txt
  // where present.
  static PromptLibrary LoadOverrides(const std::string& dir);

  const PromptPair& Get(std::string_view name) const;
  void Set(std::string name, PromptPair pair);
  std::vector<std::string> Names() const;

  // Writes every template as <dir>/<name>.{system,user}.txt.
  void Dump(const std::string& dir) const;

 private:
  std::map<std::string, PromptPair, std::less<>> pairs_;
};

// Slots each template's user prompt must contain.
std::vector<std::string> RequiredSlots(std::string_view name);

// Substitutes {key} for every key in `slots`. Throws kMissingSlot if any of
// `required` does not occur in the template.
std::string Render(std::string_view tmpl, const std::map<std::string, std::string>& slots,
                   const std::vector<std::string>& required = {});

}  // namespace ideagrpo

#endif  // IDEAGRPO_PROMPTS_HPP_
