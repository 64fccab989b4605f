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

#include "absagen/aspect_pipeline.h"

#include <algorithm>
#include <cctype>
#include <fstream>

#include <spdlog/spdlog.h>

#include "absagen/error.h"
#include "absagen/random.h"
#include "absagen/text.h"

namespace absagen {

using nlohmann::json;

std::string normalize_aspect(std::string_view aspect) {
  std::string s = normalize_text(aspect);
  auto is_edge_punct = [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u < 0x80 && std::ispunct(u) && c != '+' && c != '#';
  };
  std::size_t b = 0, e = s.size();
  while (b < e && is_edge_punct(s[b])) ++b;
  while (e > b && is_edge_punct(s[e - 1])) --e;
  return trim(std::string_view(s).substr(b, e - b));
}

// ---------------------------------------------------------------------------
// AspectPool

AspectPool::AspectPool(AspectSet positive, AspectSet neutral, AspectSet negative)
    : positive_(std::move(positive)),
      neutral_(std::move(neutral)),
      negative_(std::move(negative)) {
  for (const AspectSet *subset : {&positive_, &neutral_, &negative_}) {
    for (const auto &a : *subset) {
      if (a.empty() || normalize_aspect(a) != a) {
        throw ValidationError("aspect pool entry '" + a + "' is not normalized");
      }
      if (!all_.insert(a).second) {
        throw ValidationError("aspect '" + a + "' appears in two polarity subsets");
      }
    }
  }
}

const AspectSet &AspectPool::subset(Polarity p) const {
  switch (p) {
    case Polarity::kPositive: return positive_;
    case Polarity::kNeutral: return neutral_;
    case Polarity::kNegative: return negative_;
  }
  return neutral_;
}

bool AspectPool::invariants_hold() const {
  AspectSet u;
  std::size_t total = 0;
  for (const AspectSet *subset : {&positive_, &neutral_, &negative_}) {
    total += subset->size();
    u.insert(subset->begin(), subset->end());
  }
  return u.size() == total && u == all_;
}

json AspectPool::to_json() const {
  return json{{"all", all_},
              {"positive", positive_},
              {"neutral", neutral_},
              {"negative", negative_}};
}

AspectPool AspectPool::from_json(const json &j) {
  AspectPool pool(j.at("positive").get<AspectSet>(),
                  j.at("neutral").get<AspectSet>(),
                  j.at("negative").get<AspectSet>());
  if (j.contains("all") && j["all"].get<AspectSet>() != pool.all()) {
    throw ValidationError("aspect pool 'all' differs from the subset union");
  }
  return pool;
}

// ---------------------------------------------------------------------------
// Demonstrations

DemoMode parse_demo_mode(std::string_view name) {
  if (name == "zero" || name == "zero_shot") return DemoMode::kZeroShot;
  if (name == "related" || name == "few_shot_related") {
    return DemoMode::kFewShotRelated;
  }
  if (name == "random" || name == "few_shot_random") {
    return DemoMode::kFewShotRandom;
  }
  throw ConfigError("unknown demo strategy '" + std::string(name) + "'");
}

std::string_view demo_mode_name(DemoMode mode) {
  switch (mode) {
    case DemoMode::kZeroShot: return "zero";
    case DemoMode::kFewShotRelated: return "related";
    case DemoMode::kFewShotRandom: return "random";
  }
  return "unknown";
}

void DemoStrategy::validate() const {
  if (k < 0) throw ConfigError("demonstration count must be >= 0");
  if ((k == 0) != (mode == DemoMode::kZeroShot)) {
    throw ConfigError("demonstration count must be 0 exactly for zero-shot");
  }
}

std::vector<Demonstration> load_demo_bank(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read demo bank " + path.string());
  std::vector<Demonstration> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const json j = json::parse(line);
      out.push_back(Demonstration{j.at("sentence").get<std::string>(),
                                  j.at("aspects").get<std::vector<std::string>>(),
                                  j.value("domain", std::string())});
    } catch (const json::exception &e) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " +
                       e.what());
    }
  }
  return out;
}

std::vector<Demonstration> select_demos(std::span<const Demonstration> bank,
                                        const DemoStrategy &strategy,
                                        std::string_view domain,
                                        std::uint64_t seed) {
  strategy.validate();
  if (strategy.mode == DemoMode::kZeroShot) return {};
  std::vector<const Demonstration *> candidates;
  for (const auto &d : bank) {
    if (strategy.mode == DemoMode::kFewShotRandom || d.domain == domain) {
      candidates.push_back(&d);
    }
  }
  if (candidates.empty()) {
    throw ConfigError("no demonstrations available for strategy '" +
                      std::string(demo_mode_name(strategy.mode)) + "'");
  }
  if (candidates.size() < static_cast<std::size_t>(strategy.k)) {
    spdlog::warn("demo bank has {} candidates, fewer than k={}",
                 candidates.size(), strategy.k);
  }
  Rng rng(seed);
  std::vector<Demonstration> out;
  for (std::size_t i : rng.sample_indices(candidates.size(),
                                          static_cast<std::size_t>(strategy.k))) {
    out.push_back(*candidates[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Set operations

AspectEvalReport evaluate_aspects(const AspectSet &extracted,
                                  const AspectSet &gold) {
  AspectSet e, g;
  for (const auto &a : extracted) e.insert(normalize_aspect(a));
  for (const auto &a : gold) g.insert(normalize_aspect(a));
  g.erase("");
  e.erase("");
  if (g.empty()) throw ValidationError("gold aspect set is empty");
  std::size_t match = 0;
  for (const auto &a : e) match += g.count(a);
  AspectEvalReport r;
  r.precision = e.empty() ? 0.0 : static_cast<double>(match) / e.size();
  r.recall = static_cast<double>(match) / g.size();
  r.f1 = r.precision + r.recall > 0
             ? 2 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

AspectSet filter_non_nouns(const AspectSet &aspects, const PosLexicon &pos) {
  AspectSet out;
  for (const auto &a : aspects) {
    const std::vector<std::string> words = split_whitespace(a);
    if (words.empty()) continue;
    const std::vector<std::string> head = tokenize(words.back());
    if (head.empty()) continue;
    if (pos.is_noun(head.back())) out.insert(a);
  }
  return out;
}

AspectPool partition_by_sentiment(const AspectSet &aspects,
                                  const SentimentLexicon &lexicon,
                                  double theta) {
  AspectSet pos, neu, neg;
  for (const auto &raw : aspects) {
    const std::string a = normalize_aspect(raw);
    if (a.empty()) continue;
    const double s = lexicon.score_phrase(a);
    if (s > theta) {
      pos.insert(a);
    } else if (s < -theta) {
      neg.insert(a);
    } else {
      neu.insert(a);
    }
  }
  return AspectPool(std::move(pos), std::move(neu), std::move(neg));
}

// ---------------------------------------------------------------------------
// Pipeline

AspectPipeline::AspectPipeline(Gateway &gateway, const TemplateSet &templates,
                               const PosLexicon &pos,
                               const SentimentLexicon &sentiment, double theta)
    : gateway_(gateway),
      templates_(templates),
      pos_(pos),
      sentiment_(sentiment),
      theta_(theta) {}

AspectSet AspectPipeline::extract_aspects(std::span<const Sentence> corpus,
                                          const DemoStrategy &strategy,
                                          std::span<const Demonstration> demos,
                                          ExtractionStats *stats) {
  strategy.validate();
  const bool few_shot = strategy.mode != DemoMode::kZeroShot;
  if (few_shot == demos.empty()) {
    throw ConfigError(few_shot ? "few-shot extraction needs demonstrations"
                               : "zero-shot extraction takes no demonstrations");
  }
  std::string block;
  if (few_shot) {
    const auto &demo_tmpl = templates_.get(prompt_names::kExtractDemo);
    for (std::size_t i = 0; i < demos.size(); ++i) {
      if (i) block += "\n";
      block += render(demo_tmpl, {{"example-input", demos[i].sentence},
                                  {"example-output", json(demos[i].aspects).dump()}});
    }
  }
  const auto &tmpl = templates_.get(few_shot ? prompt_names::kExtractFewShot
                                             : prompt_names::kExtractZeroShot);

  using Answer = std::optional<std::vector<std::string>>;
  const std::vector<Answer> answers =
      gateway_.parallel_map(corpus.size(), [&](std::size_t i) -> Answer {
        const Sentence &s = corpus[i];
        CompletionRequest req;
        req.template_name = tmpl.name();
        req.prompt = render(tmpl, {{"domain", s.domain},
                                   {"input", s.text},
                                   {"demonstrations", block}});
        req.temperature = kJudgeTemperature;
        try {
          return gateway_.complete_list(req);
        } catch (const Error &e) {
          spdlog::warn("aspect extraction skipped sentence {}: {}", s.id, e.what());
          return std::nullopt;
        }
      });

  AspectSet out;
  std::size_t skipped = 0;
  for (const auto &answer : answers) {
    if (!answer) {
      ++skipped;
      continue;
    }
    for (const auto &a : *answer) {
      std::string n = normalize_aspect(a);
      if (!n.empty()) out.insert(std::move(n));
    }
  }
  if (stats) *stats = ExtractionStats{corpus.size(), skipped};
  if (skipped * 2 > corpus.size()) {
    throw PipelineError("aspect extraction failed for " + std::to_string(skipped) +
                        " of " + std::to_string(corpus.size()) + " sentences");
  }
  return out;
}

AspectSet AspectPipeline::filter_non_nouns(const AspectSet &aspects) const {
  return absagen::filter_non_nouns(aspects, pos_);
}

AspectSet AspectPipeline::extend_aspects(const AspectSet &aspects,
                                         const std::string &domain) {
  const AspectSet nouns = filter_non_nouns(aspects);
  const std::vector<std::string> ordered(nouns.begin(), nouns.end());
  const auto &tmpl = templates_.get(prompt_names::kExtend);
  const auto expansions = gateway_.parallel_map(
      ordered.size(), [&](std::size_t i) -> std::vector<std::string> {
        CompletionRequest req;
        req.template_name = tmpl.name();
        req.prompt = render(tmpl, {{"domain", domain}, {"input", ordered[i]}});
        req.temperature = kJudgeTemperature;
        try {
          return gateway_.complete_list(req);
        } catch (const Error &e) {
          spdlog::warn("aspect extension kept '{}' unexpanded: {}", ordered[i],
                       e.what());
          return {};
        }
      });
  AspectSet candidates;
  for (const auto &list : expansions) {
    for (const auto &a : list) {
      std::string n = normalize_aspect(a);
      if (!n.empty()) candidates.insert(std::move(n));
    }
  }
  AspectSet out = nouns;
  const AspectSet kept = filter_non_nouns(candidates);
  out.insert(kept.begin(), kept.end());
  return out;
}

AspectPool AspectPipeline::partition_by_sentiment(const AspectSet &aspects) const {
  return absagen::partition_by_sentiment(aspects, sentiment_, theta_);
}

AspectPipeline::Result AspectPipeline::run(std::span<const Sentence> corpus,
                                           const DemoStrategy &strategy,
                                           std::span<const Demonstration> demos,
                                           const std::string &domain,
                                           bool extend) {
  Result r;
  r.extracted = extract_aspects(corpus, strategy, demos, &r.stats);
  r.filtered = filter_non_nouns(r.extracted);
  r.extended = extend ? extend_aspects(r.filtered, domain) : r.filtered;
  r.pool = partition_by_sentiment(r.extended);
  spdlog::info("aspects: {} extracted, {} nouns, {} after extension "
               "({} pos / {} neu / {} neg)",
               r.extracted.size(), r.filtered.size(), r.extended.size(),
               r.pool.positive().size(), r.pool.neutral().size(),
               r.pool.negative().size());
  return r;
}

}  // namespace absagen
