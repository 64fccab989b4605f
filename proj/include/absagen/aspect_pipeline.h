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

#ifndef ABSAGEN_ASPECT_PIPELINE_H_
#define ABSAGEN_ASPECT_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absagen/lexicon.h"
#include "absagen/llm_gateway.h"
#include "absagen/prompt_template.h"
#include "absagen/sample.h"
#include "json.hpp"

namespace absagen {

using AspectSet = std::set<std::string>;

// Lowercase, collapse whitespace, trim, and strip surrounding punctuation.
std::string normalize_aspect(std::string_view aspect);

// The aspect set split by inherent sentiment. The three subsets are pairwise
// disjoint and their union is all(); construction enforces this.
class AspectPool {
 public:
  AspectPool() = default;
  // Throws ValidationError when the subsets overlap or hold unnormalized
  // entries.
  AspectPool(AspectSet positive, AspectSet neutral, AspectSet negative);

  const AspectSet &all() const { return all_; }
  const AspectSet &positive() const { return positive_; }
  const AspectSet &neutral() const { return neutral_; }
  const AspectSet &negative() const { return negative_; }
  const AspectSet &subset(Polarity p) const;
  bool empty() const { return all_.empty(); }

  // Re-checks disjointness and union; true when the pool is consistent.
  bool invariants_hold() const;

  nlohmann::json to_json() const;
  static AspectPool from_json(const nlohmann::json &j);

  bool operator==(const AspectPool &) const = default;

 private:
  AspectSet all_, positive_, neutral_, negative_;
};

enum class DemoMode { kZeroShot, kFewShotRelated, kFewShotRandom };

// "zero", "related" or "random". Throws ConfigError.
DemoMode parse_demo_mode(std::string_view name);
std::string_view demo_mode_name(DemoMode mode);

struct DemoStrategy {
  DemoMode mode = DemoMode::kFewShotRandom;
  int k = 4;

  // Enforces k == 0 iff zero-shot. Throws ConfigError.
  void validate() const;
};

struct Demonstration {
  std::string sentence;
  std::vector<std::string> aspects;
  std::string domain;
};

// Line-delimited {sentence, aspects, domain} records.
std::vector<Demonstration> load_demo_bank(const std::filesystem::path &path);

// Zero-shot: none. Related: k seeded draws among demos whose domain equals
// `domain`. Random: k seeded draws from the whole bank.
std::vector<Demonstration> select_demos(std::span<const Demonstration> bank,
                                        const DemoStrategy &strategy,
                                        std::string_view domain,
                                        std::uint64_t seed);

struct AspectEvalReport {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

// Exact match after normalization. Empty extracted gives P = 0. Throws
// ValidationError for an empty gold set.
AspectEvalReport evaluate_aspects(const AspectSet &extracted,
                                  const AspectSet &gold);

// Keeps aspects whose final token is a noun.
AspectSet filter_non_nouns(const AspectSet &aspects, const PosLexicon &pos);

// Sums token scores; > theta positive, < -theta negative, otherwise neutral.
AspectPool partition_by_sentiment(const AspectSet &aspects,
                                  const SentimentLexicon &lexicon,
                                  double theta = 0.1);

struct ExtractionStats {
  std::size_t sentences = 0;
  std::size_t skipped = 0;
};

// Stage one: extraction, noun filtering, extension and partitioning.
class AspectPipeline {
 public:
  AspectPipeline(Gateway &gateway, const TemplateSet &templates,
                 const PosLexicon &pos, const SentimentLexicon &sentiment,
                 double theta = 0.1);

  // One EX request per sentence; failed sentences are logged and skipped.
  // Throws PipelineError when more than half the sentences fail.
  AspectSet extract_aspects(std::span<const Sentence> corpus,
                            const DemoStrategy &strategy,
                            std::span<const Demonstration> demos,
                            ExtractionStats *stats = nullptr);

  AspectSet filter_non_nouns(const AspectSet &aspects) const;

  // One ET request per noun aspect. Results are normalized, noun-filtered and
  // merged with the filtered input; a failed request leaves its aspect
  // unexpanded.
  AspectSet extend_aspects(const AspectSet &aspects, const std::string &domain);

  AspectPool partition_by_sentiment(const AspectSet &aspects) const;

  struct Result {
    AspectSet extracted;  // raw union, normalized
    AspectSet filtered;
    AspectSet extended;
    AspectPool pool;
    ExtractionStats stats;
  };

  Result run(std::span<const Sentence> corpus, const DemoStrategy &strategy,
             std::span<const Demonstration> demos, const std::string &domain,
             bool extend = true);

 private:
  Gateway &gateway_;
  const TemplateSet &templates_;
  const PosLexicon &pos_;
  const SentimentLexicon &sentiment_;
  double theta_;
};

}  // namespace absagen

#endif  // ABSAGEN_ASPECT_PIPELINE_H_
