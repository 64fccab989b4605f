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

#ifndef ABSAGEN_GENERATOR_H_
#define ABSAGEN_GENERATOR_H_

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absagen/aspect_pipeline.h"
#include "absagen/corpus_io.h"
#include "absagen/discriminator.h"
#include "absagen/error.h"
#include "absagen/llm_gateway.h"
#include "absagen/prompt_template.h"
#include "absagen/random.h"
#include "absagen/sample.h"
#include "json.hpp"

namespace absagen {

struct AspectSentimentPair {
  std::string aspect;
  Polarity polarity = Polarity::kNeutral;

  bool operator==(const AspectSentimentPair &) const = default;
};

struct GenerationConfig {
  int rounds = 20;
  // Upper bound on pairs requested per polarity in one round.
  int batch_per_round = 512;
  // Demonstrations taken from the feedback pool per request.
  int feedback_k = 2;
  std::size_t feedback_capacity = 64;
  // Fraction of requests that ask for a multi-aspect sentence.
  double strategy_mix = 0.5;
  int aspects_per_multi = 2;
  // Annotation targets per polarity.
  PolarityCounts target_counts;
  int min_words = 10;
  int max_words = 30;
  double expected_keep_rate = 0.6;
  std::string domain;
  std::uint64_t seed = 0;

  // Throws ConfigError.
  void validate() const;
  std::string length_hint() const;
};

// Bounded FIFO of high-scoring samples reused as generation demonstrations.
// Only samples whose judgment passes the threshold are admitted.
class FeedbackPool {
 public:
  FeedbackPool(int threshold, std::size_t capacity = 64, bool strict = false);

  // False (and no change) when the judgment does not pass the threshold.
  bool push(const LabeledSample &sample, const Judgment &judgment);

  // min(k, size) distinct members drawn with `rng`.
  std::vector<LabeledSample> sample(std::size_t k, Rng &rng) const;

  std::size_t size() const { return members_.size(); }
  std::size_t capacity() const { return capacity_; }
  int threshold() const { return threshold_; }
  // Every member with its judgment, oldest first.
  const std::deque<JudgedSample> &members() const { return members_; }

 private:
  int threshold_;
  std::size_t capacity_;
  bool strict_;
  std::deque<JudgedSample> members_;
};

// Draws counts[p] aspects with replacement from the matching subset, in
// polarity order. Throws ConfigError for a nonzero count on an empty subset.
std::vector<AspectSentimentPair> build_pairs(const AspectPool &pool,
                                             const PolarityCounts &counts,
                                             Rng &rng);

// Shuffles pairs and splits them into requests: with probability
// strategy_mix a request takes up to aspects_per_multi pairs with distinct
// aspects, otherwise one.
std::vector<std::vector<AspectSentimentPair>> group_pairs(
    std::vector<AspectSentimentPair> pairs, double strategy_mix,
    int aspects_per_multi, Rng &rng);

// Every annotation term occurs case-insensitively in the sentence text.
bool verify_containment(const LabeledSample &sample);

// "(battery, positive); (screen, negative)"
std::string format_pairs(std::span<const AspectSentimentPair> pairs);

// First non-empty line with "Output:"/"Sentence:" labels and quotes removed.
// Throws FormatError when nothing remains.
std::string parse_generated_sentence(std::string_view text);

// Audit record for one generation request.
struct GenerationRecord {
  int round = 0;
  std::string sample_id;
  std::vector<AspectSentimentPair> pairs;
  std::string raw;
  // "ok", "reprompted" or "failed".
  std::string parse_status;
  std::optional<bool> containment;
  std::optional<Judgment> judgment;
  // "kept", "rejected:parse", "rejected:containment", "rejected:judge",
  // "rejected:duplicate".
  std::string outcome;

  nlohmann::json to_json() const;
};

struct GenerationStats {
  std::size_t requests = 0;
  std::size_t parse_failed = 0;
  std::size_t containment_failed = 0;
  std::size_t judge_rejected = 0;
  std::size_t duplicates = 0;
  std::size_t kept = 0;
  int rounds_run = 0;

  nlohmann::json to_json() const;
};

// Thrown when no generated sample survives; carries the per-stage counts.
class GenerationError : public PipelineError {
 public:
  GenerationError(GenerationStats stats, std::size_t rejected,
                  const std::string &message)
      : PipelineError(message), stats_(stats), rejected_(rejected) {}
  const GenerationStats &stats() const { return stats_; }
  std::size_t rejected() const { return rejected_; }

 private:
  GenerationStats stats_;
  std::size_t rejected_;
};

struct GenerationResult {
  std::vector<LabeledSample> kept;
  std::vector<LabeledSample> rejected;
  std::vector<GenerationRecord> log;
  // Every discriminator verdict with its final keep decision.
  std::vector<std::pair<JudgedSample, bool>> judgments;
  GenerationStats stats;
};

// One request's output from generate_round.
struct RoundItem {
  std::vector<AspectSentimentPair> pairs;
  std::string raw;
  std::string parse_status;
  std::optional<LabeledSample> sample;
  // The rendered prompt, kept for inspection.
  std::string prompt;
};

// Stage two: ITAT generation with feedback from earlier rounds.
class Generator {
 public:
  Generator(Gateway &gateway, const TemplateSet &templates,
            GenerationConfig config);

  // One request per group. Demonstrations come from `feedback` when
  // feedback_k > 0 and the pool is non-empty. Length hints and demonstrations
  // are drawn from `rng` before any request is sent.
  std::vector<RoundItem> generate_round(
      std::span<const std::vector<AspectSentimentPair>> groups,
      const FeedbackPool &feedback, int round, Rng &rng);

  // Rounds of build_pairs -> generate_round -> containment -> judge/filter
  // until every polarity target is met or the round budget is spent. Throws
  // PipelineError when nothing was kept.
  GenerationResult run_iterative_generation(const AspectPool &pool,
                                            Discriminator &discriminator);

  const GenerationConfig &config() const { return config_; }

 private:
  Gateway &gateway_;
  const TemplateSet &templates_;
  GenerationConfig config_;
};

}  // namespace absagen

#endif  // ABSAGEN_GENERATOR_H_
