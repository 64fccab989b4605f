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

#ifndef ABSAGEN_TESTS_HELPERS_H_
#define ABSAGEN_TESTS_HELPERS_H_

#include <unistd.h>

#include <atomic>
#include <deque>
#include <filesystem>
#include <functional>
#include <initializer_list>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "absagen/corpus_io.h"
#include "absagen/llm_gateway.h"
#include "absagen/sample.h"

namespace absagen::testing {

inline std::filesystem::path data_path(const std::string &rel) {
  return std::filesystem::path(ABSAGEN_DATA_DIR) / rel;
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("absagen-test-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }
  std::filesystem::path operator/(const std::string &name) const { return path_ / name; }

  std::filesystem::path write(const std::string &name, const std::string &content) const {
    write_file(path_ / name, content);
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline LabeledSample make_sample(
    std::string id, std::string text,
    std::initializer_list<std::pair<const char *, Polarity>> aspects,
    std::string domain = "laptop") {
  LabeledSample s;
  s.sentence = {std::move(id), std::move(text), std::move(domain)};
  for (const auto &[term, p] : aspects) s.annotations.push_back({term, p, std::nullopt});
  return s;
}

inline Judgment make_judgment(int syn, int lex, int real, bool domain = true,
                              bool sentiment = true) {
  Judgment j{domain, sentiment, std::nullopt};
  if (domain && sentiment) j.scores = QualityScores::from_axes(syn, lex, real);
  return j;
}

// Answers through a callback and records every request.
class ScriptedProvider : public CompletionProvider {
 public:
  using Script = std::function<std::string(const CompletionRequest &)>;
  explicit ScriptedProvider(Script script) : script_(std::move(script)) {}

  std::string complete(const CompletionRequest &request) override {
    {
      std::lock_guard<std::mutex> lock(mu_);
      requests_.push_back(request);
    }
    return script_(request);
  }

  std::vector<CompletionRequest> requests() const {
    std::lock_guard<std::mutex> lock(mu_);
    return requests_;
  }

 private:
  Script script_;
  mutable std::mutex mu_;
  std::vector<CompletionRequest> requests_;
};

}  // namespace absagen::testing

#endif  // ABSAGEN_TESTS_HELPERS_H_
