// Copyright 2026 The absagen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ABSAGEN_PROMPT_TEMPLATE_H_
#define ABSAGEN_PROMPT_TEMPLATE_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace absagen {

using SlotMap = std::map<std::string, std::string>;

// A named prompt body with {slot} markers. Slot names use [A-Za-z0-9_-];
// any other brace in the body is rejected at construction, so a fully
// rendered prompt never contains a leftover marker.
class PromptTemplate {
 public:
  PromptTemplate(std::string name, std::string body);

  const std::string &name() const { return name_; }
  const std::string &body() const { return body_; }
  // Distinct slot names in order of first appearance.
  const std::vector<std::string> &slots() const { return slots_; }

 private:
  std::string name_;
  std::string body_;
  std::vector<std::string> slots_;
};

// Single-pass substitution; slot values are inserted verbatim. Extra entries
// in `slots` are ignored. Throws TemplateError naming the first missing slot.
std::string render(const PromptTemplate &tmpl, const SlotMap &slots);

// Names of the prompts the pipeline uses.
namespace prompt_names {
inline constexpr const char *kExtractZeroShot = "ex_zero";
inline constexpr const char *kExtractFewShot = "ex_few";
inline constexpr const char *kExtractDemo = "ex_demo";
inline constexpr const char *kExtend = "et";
inline constexpr const char *kGenerateZeroShot = "itat_zero";
inline constexpr const char *kGenerateFewShot = "itat_few";
inline constexpr const char *kGenerateDemo = "itat_demo";
inline constexpr const char *kJudgeRelevance = "judge_relevance";
inline constexpr const char *kJudgeScore = "judge_score";
}  // namespace prompt_names

class TemplateSet {
 public:
  // The compiled-in prompts.
  static TemplateSet builtin();

  // Replaces templates by any <name>.txt present in `dir`. Unknown file names
  // are added as new templates.
  void load_overrides(const std::filesystem::path &dir);

  const PromptTemplate &get(const std::string &name) const;
  void set(PromptTemplate tmpl);
  std::vector<std::string> names() const;

 private:
  std::map<std::string, PromptTemplate> templates_;
};

}  // namespace absagen

#endif  // ABSAGEN_PROMPT_TEMPLATE_H_
