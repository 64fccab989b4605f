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

#include <set>

#include "absagen/error.h"
#include "absagen/random.h"
#include "doctest.h"
#include "support/helpers.h"

namespace absagen {
namespace {

using testing::make_judgment;
using testing::make_sample;
using testing::ScriptedProvider;

constexpr Polarity kPos = Polarity::kPositive;
constexpr Polarity kNeg = Polarity::kNegative;

JudgedSample judged(const std::string &id, int overall, bool relevant = true) {
  JudgedSample j;
  j.sample = make_sample(id, "nice screen " + id, {{"screen", kPos}});
  j.judgment = make_judgment(overall, overall, overall, relevant, relevant);
  return j;
}

std::vector<std::string> ids(const std::vector<JudgedSample> &xs) {
  std::vector<std::string> out;
  for (const auto &x : xs) out.push_back(x.sample.sentence.id);
  return out;
}

TEST_CASE("filter_by_threshold") {
  std::vector<JudgedSample> in = {judged("a", 5), judged("b", 6), judged("c", 9)};
  auto r = filter_by_threshold(in, 6);
  CHECK(ids(r.kept) == std::vector<std::string>{"b", "c"});
  CHECK(ids(r.rejected) == std::vector<std::string>{"a"});
  r = filter_by_threshold(in, 6, true);
  CHECK(ids(r.kept) == std::vector<std::string>{"c"});

  JudgedSample off = judged("d", 10);
  off.judgment.sentiment_relevant = false;
  CHECK(filter_by_threshold(std::vector{off}, 1).kept.empty());
  CHECK(filter_by_threshold(in, 1).kept.size() == 3);
  CHECK(filter_by_threshold(in, 0).kept.size() == 3);
  CHECK_THROWS_AS(filter_by_threshold(in, 11), ConfigError);
  CHECK_THROWS_AS(filter_by_threshold(in, -1), ConfigError);
}

TEST_CASE("filter partitions and is monotone in the threshold") {
  Rng rng(11);
  std::vector<JudgedSample> in;
  for (int i = 0; i < 300; ++i) {
    JudgedSample j;
    j.sample = make_sample(std::to_string(i), "screen", {{"screen", kPos}});
    j.judgment.domain_relevant = rng.bernoulli(0.9);
    j.judgment.sentiment_relevant = rng.bernoulli(0.9);
    if (j.judgment.relevant() || rng.bernoulli(0.5)) {
      j.judgment.scores = QualityScores::from_axes(
          static_cast<int>(rng.between(1, 10)), static_cast<int>(rng.between(1, 10)),
          static_cast<int>(rng.between(1, 10)));
    }
    in.push_back(j);
  }
  std::set<std::string> prev;
  for (int t = 0; t <= 10; ++t) {
    for (bool strict : {false, true}) {
      const auto r = filter_by_threshold(in, t, strict);
      CHECK(r.kept.size() + r.rejected.size() == in.size());
      const auto kept_ids = ids(r.kept);
      std::set<std::string> k(kept_ids.begin(), kept_ids.end());
      for (const auto &x : r.rejected) CHECK(k.count(x.sample.sentence.id) == 0);
      for (const auto &x : r.kept) {
        CHECK(x.judgment.relevant());
        CHECK(x.judgment.overall() >= t);
      }
    }
    const auto kept = ids(filter_by_threshold(in, t).kept);
    std::set<std::string> cur(kept.begin(), kept.end());
    if (t > 0) {
      for (const auto &id : cur) CHECK(prev.count(id) == 1);
    }
    prev = cur;
  }
}

TEST_CASE("parse_relevance") {
  CHECK(parse_relevance("yes, yes") == std::pair{true, true});
  CHECK(parse_relevance("No, Yes.") == std::pair{false, true});
  CHECK(parse_relevance("1. Yes\n2. No") == std::pair{true, false});
  CHECK_THROWS_AS(parse_relevance("maybe"), FormatError);
  CHECK_THROWS_AS(parse_relevance("yes"), FormatError);
}

TEST_CASE("parse_scores") {
  CHECK(parse_scores("(8, 7, 9)").overall == 8);
  CHECK(parse_scores("(1, 1, 1)").overall == 1);
  // 28 / 3 = 9.33 rounds to 9.
  CHECK(parse_scores("(10, 9, 9)").overall == 9);
  CHECK(parse_scores("Syntactic 8/10, lexical 6/10, realism 7/10").overall == 7);
  CHECK_THROWS_AS(parse_scores("(11, 5, 5)"), FormatError);
  CHECK_THROWS_AS(parse_scores("(8, 7)"), FormatError);
  CHECK_THROWS_AS(parse_scores("(7.5, 7, 7)"), FormatError);
  // Exhaustive: overall equals the hand-rounded mean of the three axes.
  for (int a = 1; a <= 10; ++a) {
    for (int b = 1; b <= 10; ++b) {
      for (int c = 1; c <= 10; ++c) {
        const int sum = a + b + c;
        const int want = sum / 3 + (sum % 3 == 2 ? 1 : 0);
        CHECK(QualityScores::from_axes(a, b, c).overall == want);
      }
    }
  }
}

TEST_CASE("format_sample_for_prompt") {
  auto s = make_sample("x", "Good screen, bad keys", {{"screen", kPos}, {"keys", kNeg}});
  CHECK(format_sample_for_prompt(s) ==
        "Sentence: \"Good screen, bad keys\" | Aspects: (screen, positive); (keys, negative)");
}

struct Rig {
  std::shared_ptr<ScriptedProvider> provider;
  Gateway gateway;
  TemplateSet templates = TemplateSet::builtin();
  Discriminator disc;
  explicit Rig(ScriptedProvider::Script s, Discriminator::Options o = {})
      : provider(std::make_shared<ScriptedProvider>(std::move(s))),
        gateway(provider),
        disc(gateway, templates, "laptop", o) {}
};

TEST_CASE("judge_relevance verdicts") {
  auto s = make_sample("s", "Nice screen", {{"screen", kPos}});
  CHECK(Rig([](auto &) { return "yes, yes"; }).disc.judge_relevance(s, "laptop") ==
        std::pair{true, true});
  CHECK(Rig([](auto &) { return "no, yes"; }).disc.judge_relevance(s, "laptop") ==
        std::pair{false, true});
  Rig garbage([](auto &) { return "the weather is nice"; });
  std::string note;
  CHECK(garbage.disc.judge_relevance(s, "laptop", &note) == std::pair{false, false});
  CHECK_FALSE(note.empty());
  CHECK(garbage.provider->requests().size() == 2);
  for (const auto &r : garbage.provider->requests()) CHECK(r.temperature == 0.0);
}

TEST_CASE("score_sample and judge") {
  auto s = make_sample("s", "Nice screen", {{"screen", kPos}});
  Rig ok([](const CompletionRequest &r) -> std::string {
    return r.template_name == prompt_names::kJudgeRelevance ? "yes, yes" : "(10, 9, 9)";
  });
  auto j = ok.disc.judge(s);
  CHECK(j.judgment.relevant());
  REQUIRE(j.judgment.scores.has_value());
  CHECK(j.judgment.overall() == 9);

  Rig irrelevant([](const CompletionRequest &r) -> std::string {
    return r.template_name == prompt_names::kJudgeRelevance ? "no, no" : "(10, 10, 10)";
  });
  auto k = irrelevant.disc.judge(s);
  CHECK_FALSE(k.judgment.scores.has_value());
  CHECK(irrelevant.provider->requests().size() == 1);

  Rig bad([](const CompletionRequest &r) -> std::string {
    return r.template_name == prompt_names::kJudgeRelevance ? "yes, yes" : "(0, 12, 5)";
  });
  CHECK_THROWS_AS(bad.disc.score_sample(s), ScoringError);
  auto b = bad.disc.judge(s);
  CHECK_FALSE(b.judgment.scores.has_value());
  CHECK_FALSE(b.note.empty());
  CHECK(bad.disc.filter(std::vector{b}).kept.empty());
}

TEST_CASE("judgment log record") {
  auto j = judged("q", 7);
  auto rec = judgment_log_record(j, true);
  CHECK(rec["id"] == "q");
  CHECK(rec["overall"] == 7);
  CHECK(rec["kept"] == true);
  CHECK(rec["scores"] == nlohmann::json::array({7, 7, 7}));
}

}  // namespace
}  // namespace absagen
