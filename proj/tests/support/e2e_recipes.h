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

#ifndef ABSAGEN_TESTS_E2E_RECIPES_H_
#define ABSAGEN_TESTS_E2E_RECIPES_H_

#include <string>
#include <vector>

#include "support/helpers.h"

namespace absagen::testing {

// CLI invocations covered by the shipped replay fixture
// (data/fixtures/e2e/replay.jsonl). Provider, fixture and output flags are
// appended by the caller.
struct Recipe {
  std::string name;
  std::vector<std::string> args;
};

inline std::string e2e(const std::string &file) {
  return data_path("fixtures/e2e/" + file).string();
}

inline std::vector<Recipe> e2e_recipes() {
  const std::vector<std::string> common = {"--corpus", e2e("corpus.txt"), "--domain",
                                           "laptop",   "--gold",           e2e("gold_train.jsonl"),
                                           "--seed",   "7"};
  auto with = [&](std::vector<std::string> head, std::vector<std::string> tail) {
    head.insert(head.end(), common.begin(), common.end());
    head.insert(head.end(), tail.begin(), tail.end());
    return head;
  };
  return {
      {"full", with({"full"}, {"--strategy", "random", "--test", e2e("test.jsonl"),
                                 "--ratio", "2", "--batch-per-round", "4"})},
      {"extract-zero", with({"extract"}, {"--strategy", "zero"})},
      {"extract-related", with({"extract"}, {"--strategy", "related"})},
      {"sweep-threshold",
       with({"sweep-threshold"}, {"--test", e2e("test.jsonl"), "--rounds", "3"})},
      {"sweep-ratio", with({"sweep-ratio"}, {"--rounds", "3"})},
  };
}

// argv-style call into run_cli.
int run_cli_args(const std::vector<std::string> &args);

}  // namespace absagen::testing

#endif  // ABSAGEN_TESTS_E2E_RECIPES_H_
