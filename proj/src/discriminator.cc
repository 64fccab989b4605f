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

#include "absagen/discriminator.h"

#include <cctype>

#include <spdlog/spdlog.h>

#include "absagen/error.h"
#include "absagen/text.h"

namespace absagen {

using nlohmann::json;

namespace {

constexpr std::string_view kRelevanceReprompt =
    "\n\nAnswer only with two words separated by a comma, each yes or no.";
constexpr std::string_view kScoreReprompt =
    "\n\nAnswer only with three integers from 1 to 10 in the form (a, b, c).";

}  // namespace

bool passes_threshold(const Judgment &judgment, int threshold, bool strict) {
  if (!judgment.relevant() || !judgment.scores) return false;
  const int overall = judgment.scores->overall;
  return strict ? overall > threshold : overall >= threshold;
}

FilterResult filter_by_threshold(std::span<const JudgedSample> judged,
                                 int threshold, bool strict) {
  if (threshold < 0 || threshold > 10) {
    throw ConfigError("threshold " + std::to_string(threshold) +
                      " outside 0..10");
  }
  FilterResult r;
  for (const auto &j : judged) {
    (passes_threshold(j.judgment, threshold, strict) ? r.kept : r.rejected)
        .push_back(j);
  }
  return r;
}

std::pair<bool, bool> parse_relevance(std::string_view text) {
  std::vector<bool> verdicts;
  for (const auto &token : tokenize(text)) {
    if (token == "yes") verdicts.push_back(true);
    if (token == "no") verdicts.push_back(false);
    if (verdicts.size() == 2) return {verdicts[0], verdicts[1]};
  }
  throw FormatError("relevance verdict needs two yes/no answers",
                    std::string(text));
}

QualityScores parse_scores(std::string_view text) {
  std::vector<long> values;
  std::size_t i = 0;
  while (i < text.size() && values.size() < 3) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    const bool denominator = i > 0 && text[i - 1] == '/';
    const bool fraction = j < text.size() && text[j] == '.' && j + 1 < text.size() &&
                          std::isdigit(static_cast<unsigned char>(text[j + 1]));
    if (fraction) {
      throw FormatError("scores must be integers", std::string(text));
    }
    if (!denominator) {
      const std::string digits(text.substr(i, std::min<std::size_t>(j - i, 6)));
      values.push_back(std::stol(digits));
    }
    i = j;
  }
  if (values.size() < 3) {
    throw FormatError("expected three integer scores", std::string(text));
  }
  for (long v : values) {
    if (v < 1 || v > 10) {
      throw FormatError("score " + std::to_string(v) + " outside 1..10",
                        std::string(text));
    }
  }
  return QualityScores::from_axes(static_cast<int>(values[0]),
                                  static_cast<int>(values[1]),
                                  static_cast<int>(values[2]));
}

std::string format_sample_for_prompt(const LabeledSample &sample) {
  std::string out = "Sentence: \"" + sample.sentence.text + "\" | Aspects: ";
  for (std::size_t i = 0; i < sample.annotations.size(); ++i) {
    if (i) out += "; ";
    out += "(" + sample.annotations[i].term + ", " +
           std::string(polarity_name(sample.annotations[i].polarity)) + ")";
  }
  return out;
}

json judgment_log_record(const JudgedSample &judged, bool kept) {
  const Judgment &j = judged.judgment;
  json rec = {{"id", judged.sample.sentence.id},
              {"domain_relevant", j.domain_relevant},
              {"sentiment_relevant", j.sentiment_relevant},
              {"kept", kept}};
  if (j.scores) {
    rec["scores"] = {j.scores->syntactic, j.scores->lexical, j.scores->realism};
    rec["overall"] = j.scores->overall;
  } else {
    rec["scores"] = nullptr;
    rec["overall"] = nullptr;
  }
  if (!judged.note.empty()) rec["note"] = judged.note;
  return rec;
}

Discriminator::Discriminator(Gateway &gateway, const TemplateSet &templates,
                             std::string domain, Options options)
    : gateway_(gateway),
      templates_(templates),
      domain_(std::move(domain)),
      options_(std::move(options)) {
  if (options_.threshold < 0 || options_.threshold > 10) {
    throw ConfigError("threshold " + std::to_string(options_.threshold) +
                      " outside 0..10");
  }
}

std::pair<bool, bool> Discriminator::judge_relevance(const LabeledSample &sample,
                                                     const std::string &domain,
                                                     std::string *note) {
  const auto &tmpl = templates_.get(prompt_names::kJudgeRelevance);
  CompletionRequest req;
  req.template_name = tmpl.name();
  req.prompt = render(tmpl, {{"domain", domain},
                             {"length", options_.length_hint},
                             {"input", format_sample_for_prompt(sample)}});
  req.temperature = kJudgeTemperature;
  req.max_tokens = 16;
  try {
    return gateway_.complete_parsed(req, parse_relevance, kRelevanceReprompt);
  } catch (const FormatError &e) {
    spdlog::warn("sample {}: unparseable relevance verdict, treated as "
                 "irrelevant: {}", sample.sentence.id, e.raw());
    if (note) *note = "unparseable relevance verdict";
    return {false, false};
  }
}

Judgment Discriminator::score_sample(const LabeledSample &sample) {
  const auto &tmpl = templates_.get(prompt_names::kJudgeScore);
  CompletionRequest req;
  req.template_name = tmpl.name();
  req.prompt = render(tmpl, {{"domain", domain_},
                             {"length", options_.length_hint},
                             {"input", format_sample_for_prompt(sample)}});
  req.temperature = kJudgeTemperature;
  req.max_tokens = 32;
  Judgment j;
  j.domain_relevant = true;
  j.sentiment_relevant = true;
  try {
    j.scores = gateway_.complete_parsed(req, parse_scores, kScoreReprompt);
  } catch (const FormatError &e) {
    throw ScoringError("sample " + sample.sentence.id +
                       ": unusable scores: " + e.what());
  }
  return j;
}

JudgedSample Discriminator::judge(const LabeledSample &sample) {
  JudgedSample out{sample, {}, {}};
  const auto [domain_ok, sentiment_ok] =
      judge_relevance(sample, domain_, &out.note);
  out.judgment.domain_relevant = domain_ok;
  out.judgment.sentiment_relevant = sentiment_ok;
  if (!out.judgment.relevant()) return out;
  try {
    out.judgment = score_sample(sample);
  } catch (const ScoringError &e) {
    spdlog::warn("{}", e.what());
    out.note = "scoring failed";
  }
  return out;
}

std::vector<JudgedSample> Discriminator::judge_all(
    std::span<const LabeledSample> samples) {
  return gateway_.parallel_map(samples.size(),
                               [&](std::size_t i) { return judge(samples[i]); });
}

}  // namespace absagen
