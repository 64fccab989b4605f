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

#ifndef ABSAGEN_DISCRIMINATOR_H_
#define ABSAGEN_DISCRIMINATOR_H_

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absagen/llm_gateway.h"
#include "absagen/prompt_template.h"
#include "absagen/sample.h"
#include "json.hpp"

namespace absagen {

inline constexpr int kDefaultThreshold = 6;

struct JudgedSample {
  LabeledSample sample;
  Judgment judgment;
  // Why judging degraded, if it did (unparseable verdict, scoring failure).
  std::string note;
};

struct FilterResult {
  std::vector<JudgedSample> kept;
  std::vector<JudgedSample> rejected;
};

// Keeps a sample iff both relevance flags hold, it was scored, and its
// overall score is >= threshold (> threshold when strict). Order preserved.
// Throws ConfigError unless 0 <= threshold <= 10.
FilterResult filter_by_threshold(std::span<const JudgedSample> judged,
                                 int threshold, bool strict = false);

bool passes_threshold(const Judgment &judgment, int threshold, bool strict);

// "yes, no" style verdicts; the first two yes/no words are used.
std::pair<bool, bool> parse_relevance(std::string_view text);

// First three integers in 1..10, ignoring "/10" denominators. Overall is the
// rounded mean.
QualityScores parse_scores(std::string_view text);

// `Sentence: "..." | Aspects: (battery, positive); (screen, negative)`
std::string format_sample_for_prompt(const LabeledSample &sample);

// {id, domain_relevant, sentiment_relevant, scores, overall, kept, note}
nlohmann::json judgment_log_record(const JudgedSample &judged, bool kept);

// LLM-as-judge relevance checks plus three-axis scoring.
class Discriminator {
 public:
  struct Options {
    int threshold = kDefaultThreshold;
    bool strict = false;
    std::string length_hint = "10 to 30 words";
  };

  Discriminator(Gateway &gateway, const TemplateSet &templates,
                std::string domain, Options options);

  // (domain_relevant, sentiment_relevant). An unparseable verdict after one
  // re-prompt yields (false, false).
  std::pair<bool, bool> judge_relevance(const LabeledSample &sample,
                                        const std::string &domain,
                                        std::string *note = nullptr);

  // Both relevance flags are set true. Throws ScoringError when the answer
  // stays unparseable or out of range after one re-prompt.
  Judgment score_sample(const LabeledSample &sample);

  // Relevance first; only relevant samples are scored.
  JudgedSample judge(const LabeledSample &sample);
  std::vector<JudgedSample> judge_all(std::span<const LabeledSample> samples);

  FilterResult filter(std::span<const JudgedSample> judged) const {
    return filter_by_threshold(judged, options_.threshold, options_.strict);
  }

  const Options &options() const { return options_; }
  const std::string &domain() const { return domain_; }

 private:
  Gateway &gateway_;
  const TemplateSet &templates_;
  std::string domain_;
  Options options_;
};

}  // namespace absagen

#endif  // ABSAGEN_DISCRIMINATOR_H_
