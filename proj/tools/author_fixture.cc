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

// Records data/fixtures/e2e/replay.jsonl by running every end-to-end recipe
// in record mode against a local simulated chat endpoint.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "absagen/corpus_io.h"
#include "json.hpp"
#include "support/e2e_recipes.h"
#include "support/helpers.h"
#include "support/mock_chat_server.h"

int main(int argc, char **argv) {
  namespace fs = std::filesystem;
  using namespace absagen::testing;
  const fs::path fixture =
      argc > 1 ? fs::path(argv[1]) : fs::path(e2e("replay.jsonl"));
  fs::remove(fixture);

  MockChatServer server;
  TempDir tmp;
  const auto live = tmp.write(
      "live.json", nlohmann::json{{"base_url", server.base_url()}, {"timeout_seconds", 10}}
                       .dump());
  for (const auto &recipe : e2e_recipes()) {
    auto args = recipe.args;
    for (const char *a : {"--provider", "record"}) args.push_back(a);
    args.insert(args.end(), {"--fixture", fixture.string(), "--live-config",
                             live.string(), "--out", (tmp / "out").string()});
    const int code = run_cli_args(args);
    std::fprintf(stderr, "%s: exit %d\n", recipe.name.c_str(), code);
    if (code != 0) return code;
  }
  // Records sorted by line.
  std::vector<std::string> lines;
  {
    std::istringstream in(absagen::read_file(fixture));
    for (std::string line; std::getline(in, line);) {
      if (!line.empty()) lines.push_back(line);
    }
  }
  std::sort(lines.begin(), lines.end());
  std::string sorted;
  for (const auto &line : lines) sorted += line + "\n";
  absagen::write_file(fixture, sorted);
  std::fprintf(stderr, "%d requests served, fixture %s\n", server.requests(),
               fixture.string().c_str());
  return 0;
}
