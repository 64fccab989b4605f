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

#include "absagen/generator.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include <spdlog/spdlog.h>

#include "absagen/error.h"
#include "absagen/text.h"

namespace absagen {

using nlohmann::json;

namespace {

constexpr std::string_view kSentenceReprompt = "\n\nAnswer only with the sentence.";

std::string sample_id(int round, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "r%d-%04zu", round, index);
  return buf;
}

std::string dedup_key(const LabeledSample &s) {
  std::vector<std::string> parts;
  for (const auto &a : s.annotations) {
    parts.push_back(normalize_text(a.term) + "\x1f" +
                    std::to_string(polarity_code(a.polarity)));
  }
  std::sort(parts.begin(), parts.end());
  std::string key = normalize_text(s.sentence.text);
  for (const auto &p : parts) key += "\x1e" + p;
  return key;
}

}  // namespace

void GenerationConfig::validate() const {
  if (rounds <= 0) throw ConfigError("rounds must be positive");
  if (batch_per_round <= 0) throw ConfigError("batch_per_round must be positive");
  if (feedback_k < 0) throw ConfigError("feedback_k must be >= 0");
  if (feedback_capacity == 0) throw ConfigError("feedback capacity must be positive");
  if (!(strategy_mix >= 0 && strategy_mix <= 1)) {
    throw ConfigError("strategy_mix must lie in [0, 1]");
  }
  if (aspects_per_multi < 2) throw ConfigError("aspects_per_multi must be >= 2");
  for (long c : target_counts.counts) {
    if (c < 0) throw ConfigError("target counts must be >= 0");
  }
  if (min_words <= 0 || max_words < min_words) {
    throw ConfigError("length hint must satisfy 0 < min <= max");
  }
  if (!(expected_keep_rate > 0 && expected_keep_rate <= 1)) {
    throw ConfigError("expected_keep_rate must lie in (0, 1]");
  }
}

std::string GenerationConfig::length_hint() const {
  return std::to_string(min_words) + " to " + std::to_string(max_words) + " words";
}

// ---------------------------------------------------------------------------
// FeedbackPool

FeedbackPool::FeedbackPool(int threshold, std::size_t capacity, bool strict)
    : threshold_(threshold), capacity_(capacity), strict_(strict) {
  if (capacity_ == 0) throw ConfigError("feedback capacity must be positive");
}

bool FeedbackPool::push(const LabeledSample &sample, const Judgment &judgment) {
  if (!passes_threshold(judgment, threshold_, strict_)) return false;
  if (members_.size() == capacity_) members_.pop_front();
  members_.push_back(JudgedSample{sample, judgment, {}});
  return true;
}

std::vector<LabeledSample> FeedbackPool::sample(std::size_t k, Rng &rng) const {
  std::vector<LabeledSample> out;
  for (std::size_t i : rng.sample_indices(members_.size(), k)) {
    out.push_back(members_[i].sample);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pairs

std::vector<AspectSentimentPair> build_pairs(const AspectPool &pool,
                                             const PolarityCounts &counts,
                                             Rng &rng) {
  std::vector<AspectSentimentPair> out;
  for (Polarity p : kAllPolarities) {
    const long n = counts[p];
    if (n < 0) throw ConfigError("negative pair count");
    if (n == 0) continue;
    const AspectSet &subset = pool.subset(p);
    if (subset.empty()) {
      throw ConfigError("target of " + std::to_string(n) + " " +
                        std::string(polarity_name(p)) +
                        " pairs but the aspect pool has no " +
                        std::string(polarity_name(p)) + " aspects");
    }
    const std::vector<std::string> aspects(subset.begin(), subset.end());
    for (long i = 0; i < n; ++i) {
      out.push_back(AspectSentimentPair{aspects[rng.index(aspects.size())], p});
    }
  }
  return out;
}

std::vector<std::vector<AspectSentimentPair>> group_pairs(
    std::vector<AspectSentimentPair> pairs, double strategy_mix,
    int aspects_per_multi, Rng &rng) {
  rng.shuffle(pairs);
  std::vector<std::vector<AspectSentimentPair>> groups;
  std::size_t i = 0;
  while (i < pairs.size()) {
    std::vector<AspectSentimentPair> group{pairs[i]};
    std::size_t next = i + 1;
    if (rng.bernoulli(strategy_mix)) {
      // Pull later pairs with unseen aspects forward into this group.
      for (std::size_t j = next; j < pairs.size() &&
                                 group.size() < static_cast<std::size_t>(aspects_per_multi);
           ++j) {
        const bool fresh = std::none_of(group.begin(), group.end(), [&](const auto &g) {
          return g.aspect == pairs[j].aspect;
        });
        if (!fresh) continue;
        std::swap(pairs[next], pairs[j]);
        group.push_back(pairs[next]);
        ++next;
      }
    }
    groups.push_back(std::move(group));
    i = next;
  }
  return groups;
}

bool verify_containment(const LabeledSample &sample) {
  return std::all_of(sample.annotations.begin(), sample.annotations.end(),
                     [&](const AspectAnnotation &a) {
                       return contains_ci(sample.sentence.text, a.term);
                     });
}

std::string format_pairs(std::span<const AspectSentimentPair> pairs) {
  std::string out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i) out += "; ";
    out += "(" + pairs[i].aspect + ", " +
           std::string(polarity_name(pairs[i].polarity)) + ")";
  }
  return out;
}

std::string parse_generated_sentence(std::string_view text) {
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line = trim(text.substr(start, end - start));
    start = end + 1;
    for (std::string_view label : {"output:", "sentence:", "answer:"}) {
      if (to_lower(line).starts_with(label)) {
        line = trim(std::string_view(line).substr(label.size()));
      }
    }
    while (line.size() >= 2 &&
           ((line.front() == '"' && line.back() == '"') ||
            (line.front() == '\'' && line.back() == '\''))) {
      line = trim(std::string_view(line).substr(1, line.size() - 2));
    }
    if (!line.empty()) return line;
  }
  throw FormatError("no sentence in LLM output", std::string(text));
}

json GenerationRecord::to_json() const {
  json jp = json::array();
  for (const auto &p : pairs) {
    jp.push_back({{"aspect", p.aspect}, {"polarity", polarity_code(p.polarity)}});
  }
  json j = {{"round", round},   {"id", sample_id}, {"pairs", std::move(jp)},
            {"raw", raw},       {"parse_status", parse_status},
            {"outcome", outcome}};
  j["containment"] = containment ? json(*containment) : json(nullptr);
  j["judgment"] = judgment ? judgment_to_json(*judgment) : json(nullptr);
  return j;
}

json GenerationStats::to_json() const {
  return {{"requests", requests},
          {"parse_failed", parse_failed},
          {"containment_failed", containment_failed},
          {"judge_rejected", judge_rejected},
          {"duplicates", duplicates},
          {"kept", kept},
          {"rounds_run", rounds_run}};
}

// ---------------------------------------------------------------------------
// Generator

Generator::Generator(Gateway &gateway, const TemplateSet &templates,
                     GenerationConfig config)
    : gateway_(gateway), templates_(templates), config_(std::move(config)) {
  config_.validate();
}

std::vector<RoundItem> Generator::generate_round(
    std::span<const std::vector<AspectSentimentPair>> groups,
    const FeedbackPool &feedback, int round, Rng &rng) {
  const bool few_shot = config_.feedback_k > 0 && feedback.size() > 0;
  const auto &tmpl = templates_.get(few_shot ? prompt_names::kGenerateFewShot
                                             : prompt_names::kGenerateZeroShot);
  const auto &demo_tmpl = templates_.get(prompt_names::kGenerateDemo);

  std::vector<RoundItem> items(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    RoundItem &item = items[i];
    item.pairs = groups[i];
    const long long words = rng.between(config_.min_words, config_.max_words);
    std::string block;
    if (few_shot) {
      const auto demos =
          feedback.sample(static_cast<std::size_t>(config_.feedback_k), rng);
      for (std::size_t d = 0; d < demos.size(); ++d) {
        std::vector<AspectSentimentPair> demo_pairs;
        for (const auto &a : demos[d].annotations) {
          demo_pairs.push_back({a.term, a.polarity});
        }
        if (d) block += "\n";
        block += render(demo_tmpl, {{"example-input", format_pairs(demo_pairs)},
                                    {"example-output", demos[d].sentence.text}});
      }
    }
    item.prompt = render(tmpl, {{"domain", config_.domain},
                                {"length", "about " + std::to_string(words) + " words"},
                                {"input", format_pairs(item.pairs)},
                                {"demonstrations", block}});
  }

  gateway_.parallel_map(items.size(), [&](std::size_t i) {
    RoundItem &item = items[i];
    CompletionRequest req;
    req.template_name = tmpl.name();
    req.prompt = item.prompt;
    req.temperature = kGenerationTemperature;
    req.seed = static_cast<long long>(derive_seed(config_.seed, round) & 0x7fffffff);
    bool reprompted = false;
    auto parse = [&](const std::string &raw) {
      item.raw = raw;
      if (reprompted) item.parse_status = "reprompted";
      reprompted = true;
      return parse_generated_sentence(raw);
    };
    try {
      std::string text = gateway_.complete_parsed(req, parse, kSentenceReprompt);
      if (item.parse_status.empty()) item.parse_status = "ok";
      LabeledSample s;
      s.sentence = Sentence{sample_id(round, i), std::move(text), config_.domain};
      for (const auto &p : item.pairs) {
        s.annotations.push_back(AspectAnnotation{p.aspect, p.polarity, std::nullopt});
      }
      s.provenance = GeneratedOrigin{round, std::nullopt};
      item.sample = std::move(s);
    } catch (const FormatError &) {
      item.parse_status = "failed";
      spdlog::warn("round {} request {}: unparseable generation, pair skipped",
                   round, i);
    } catch (const FixtureError &e) {
      item.parse_status = "failed";
      spdlog::warn("round {} request {}: {}", round, i, e.what());
    } catch (const TransportError &e) {
      item.parse_status = "failed";
      spdlog::warn("round {} request {}: {}", round, i, e.what());
    }
    return 0;
  });
  return items;
}

GenerationResult Generator::run_iterative_generation(const AspectPool &pool,
                                                     Discriminator &discriminator) {
  if (!pool.invariants_hold()) throw ValidationError("aspect pool is inconsistent");
  GenerationResult result;
  FeedbackPool feedback(discriminator.options().threshold, config_.feedback_capacity,
                        discriminator.options().strict);
  PolarityCounts kept_counts;
  std::set<std::string> kept_keys;

  for (int round = 1; round <= config_.rounds; ++round) {
    PolarityCounts request;
    bool any = false;
    for (Polarity p : kAllPolarities) {
      const long remaining = config_.target_counts[p] - kept_counts[p];
      if (remaining <= 0) continue;
      any = true;
      const long wanted = static_cast<long>(
          std::ceil(static_cast<double>(remaining) / config_.expected_keep_rate));
      request[p] = std::min<long>(wanted, config_.batch_per_round);
    }
    if (!any) break;
    result.stats.rounds_run = round;

    Rng rng(derive_seed(config_.seed, static_cast<std::uint64_t>(round)));
    const auto pairs = build_pairs(pool, request, rng);
    const auto groups = group_pairs(pairs, config_.strategy_mix,
                                    config_.aspects_per_multi, rng);
    std::vector<RoundItem> items = generate_round(groups, feedback, round, rng);
    result.stats.requests += items.size();

    std::vector<GenerationRecord> records(items.size());
    std::vector<LabeledSample> candidates;
    std::vector<std::size_t> candidate_item;
    for (std::size_t i = 0; i < items.size(); ++i) {
      GenerationRecord &rec = records[i];
      rec.round = round;
      rec.sample_id = sample_id(round, i);
      rec.pairs = items[i].pairs;
      rec.raw = items[i].raw;
      rec.parse_status = items[i].parse_status;
      if (!items[i].sample) {
        rec.outcome = "rejected:parse";
        ++result.stats.parse_failed;
        continue;
      }
      rec.containment = verify_containment(*items[i].sample);
      if (!*rec.containment) {
        rec.outcome = "rejected:containment";
        ++result.stats.containment_failed;
        result.rejected.push_back(*items[i].sample);
        continue;
      }
      candidates.push_back(*items[i].sample);
      candidate_item.push_back(i);
    }

    std::vector<JudgedSample> judged = discriminator.judge_all(candidates);
    for (std::size_t c = 0; c < judged.size(); ++c) {
      GenerationRecord &rec = records[candidate_item[c]];
      JudgedSample &js = judged[c];
      std::get<GeneratedOrigin>(js.sample.provenance).judgment = js.judgment;
      rec.judgment = js.judgment;
      const bool pass = passes_threshold(js.judgment, discriminator.options().threshold,
                                         discriminator.options().strict);
      bool kept = false;
      if (!pass) {
        rec.outcome = "rejected:judge";
        ++result.stats.judge_rejected;
        result.rejected.push_back(js.sample);
      } else if (!kept_keys.insert(dedup_key(js.sample)).second) {
        rec.outcome = "rejected:duplicate";
        ++result.stats.duplicates;
        result.rejected.push_back(js.sample);
      } else {
        kept = true;
        rec.outcome = "kept";
        ++result.stats.kept;
        for (const auto &a : js.sample.annotations) ++kept_counts[a.polarity];
        feedback.push(js.sample, js.judgment);
        result.kept.push_back(js.sample);
      }
      result.judgments.emplace_back(js, kept);
    }
    for (auto &rec : records) result.log.push_back(std::move(rec));
    spdlog::info("round {}: {} requests, {} kept so far ({} / {} / {})", round,
                 items.size(), result.kept.size(), kept_counts.counts[0],
                 kept_counts.counts[1], kept_counts.counts[2]);
  }

  if (result.kept.empty()) {
    throw GenerationError(
        result.stats, result.rejected.size(),
        "no generated sample survived: " + std::to_string(result.stats.requests) +
        " requests, " + std::to_string(result.stats.parse_failed) + " unparseable, " +
        std::to_string(result.stats.containment_failed) + " failed containment, " +
        std::to_string(result.stats.judge_rejected) + " rejected by the judge, " +
        std::to_string(result.stats.duplicates) + " duplicates");
  }
  return result;
}

}  // namespace absagen
