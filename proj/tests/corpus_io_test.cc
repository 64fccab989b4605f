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

#include "absagen/corpus_io.h"

#include <algorithm>
#include <map>
#include <set>

#include "absagen/error.h"
#include "absagen/random.h"
#include "absagen/text.h"
#include "doctest.h"
#include "support/helpers.h"

namespace absagen {
namespace {

using testing::make_sample;
using testing::TempDir;
constexpr Polarity kPos = Polarity::kPositive;
constexpr Polarity kNeu = Polarity::kNeutral;
constexpr Polarity kNeg = Polarity::kNegative;

TEST_CASE("polarity codes are bijective") {
  for (int c = 0; c < 3; ++c) CHECK(polarity_code(polarity_from_code(c)) == c);
  for (Polarity p : kAllPolarities) {
    CHECK(polarity_from_name(polarity_name(p)) == p);
  }
  CHECK(polarity_from_name("Positive") == kPos);
  CHECK_THROWS_AS(polarity_from_code(3), ParseError);
  CHECK_THROWS_AS(polarity_from_name("conflict"), ParseError);
}

TEST_CASE("text helpers") {
  CHECK(normalize_text("  The  Battery\tLIFE ") == "the battery life");
  CHECK(is_valid_utf8("caf\xc3\xa9"));
  CHECK_FALSE(is_valid_utf8("bad \xc3"));
  CHECK_FALSE(is_valid_utf8("\xff"));
  CHECK(utf8_length("caf\xc3\xa9 au lait") == 12);
  CHECK(utf8_slice("caf\xc3\xa9 bar", 5, 8) == std::optional<std::string>("bar"));
  CHECK_FALSE(utf8_slice("abc", 2, 4).has_value());
  CHECK(find_ci("The Caf\xc3\xa9 Menu", "menu") == std::optional<std::size_t>(9));
  CHECK(tokenize("The screen's great, well-built!") ==
        std::vector<std::string>{"the", "screen's", "great", "well-built"});
}

TEST_CASE("load_unlabeled_corpus maps lines to ids") {
  TempDir tmp;
  auto p = tmp.write("c.txt", "first one\n\n second \r\nthird\n");
  auto s = load_unlabeled_corpus(p, "laptop");
  REQUIRE(s.size() == 3);
  CHECK(s[0].id == "1");
  CHECK(s[1].id == "3");
  CHECK(s[1].text == "second");
  CHECK(s[2].id == "4");
  CHECK(s[2].domain == "laptop");

  CHECK(load_unlabeled_corpus(tmp.write("e.txt", ""), "x").empty());
  CHECK_THROWS_AS(load_unlabeled_corpus(tmp / "missing.txt", "x"), IoError);
  try {
    load_unlabeled_corpus(tmp.write("bad.txt", "ok\nbad \xc3\n"), "x");
    FAIL("expected DecodeError");
  } catch (const DecodeError &e) {
    CHECK(e.line() == 2);
  }
}

const char *kXml2014 = R"(<?xml version="1.0" encoding="UTF-8"?>
<sentences>
  <sentence id="10">
    <text>The battery life is great but the screen is dim.</text>
    <aspectTerms>
      <aspectTerm term="battery life" polarity="positive" from="4" to="16"/>
      <aspectTerm term="screen" polarity="negative" from="34" to="40"/>
    </aspectTerms>
  </sentence>
  <sentence id="11">
    <text>Keyboard is fine.</text>
    <aspectTerms>
      <aspectTerm term="Keyboard" polarity="conflict" from="0" to="8"/>
    </aspectTerms>
  </sentence>
  <sentence id="12">
    <text>The fan, the fan!</text>
    <aspectTerms>
      <aspectTerm term="fan" polarity="positive" from="4" to="7"/>
      <aspectTerm term="fan" polarity="negative" from="13" to="16"/>
    </aspectTerms>
  </sentence>
  <sentence id="13">
    <text>No opinions here.</text>
  </sentence>
  <sentence id="14">
    <text>Price is ok, keys are mushy.</text>
    <aspectTerms>
      <aspectTerm term="Price" polarity="neutral" from="0" to="5"/>
      <aspectTerm term="keys" polarity="conflict" from="13" to="17"/>
    </aspectTerms>
  </sentence>
</sentences>
)";

TEST_CASE("SemEval 2014 XML: conflicts removed, spans checked") {
  TempDir tmp;
  auto samples = load_gold_dataset(tmp.write("l.xml", kXml2014),
                                   DatasetFormat::kSemevalXml, "laptop");
  REQUIRE(samples.size() == 2);
  CHECK(samples[0].sentence.id == "10");
  CHECK(samples[0].sentence.domain == "laptop");
  REQUIRE(samples[0].annotations.size() == 2);
  CHECK(samples[0].annotations[0].span == std::optional<CharSpan>(CharSpan{4, 16}));
  CHECK(samples[1].sentence.id == "14");
  REQUIRE(samples[1].annotations.size() == 1);
  CHECK(samples[1].annotations[0].polarity == kNeu);
  const PolarityCounts c = dataset_stats(samples);
  CHECK(c.counts == std::array<long, 3>{1, 1, 1});
}

TEST_CASE("SemEval 2015/16 XML opinions") {
  const char *xml = R"(<Reviews><Review rid="1"><sentences>
    <sentence id="1:0"><text>Great sushi and friendly staff.</text>
      <Opinions>
        <Opinion target="sushi" category="FOOD#QUALITY" polarity="positive" from="6" to="11"/>
        <Opinion target="sushi" category="FOOD#STYLE" polarity="positive" from="6" to="11"/>
        <Opinion target="staff" category="SERVICE#GENERAL" polarity="positive" from="25" to="30"/>
        <Opinion target="NULL" category="RESTAURANT#GENERAL" polarity="positive" from="0" to="0"/>
      </Opinions>
    </sentence>
    <sentence id="1:1"><text>Would come back.</text>
      <Opinions>
        <Opinion target="NULL" category="RESTAURANT#GENERAL" polarity="positive" from="0" to="0"/>
      </Opinions>
    </sentence>
  </sentences></Review></Reviews>)";
  TempDir tmp;
  auto s = load_gold_dataset(tmp.write("r.xml", xml), DatasetFormat::kSemevalXml,
                             "restaurant");
  REQUIRE(s.size() == 1);
  CHECK(s[0].annotations.size() == 2);
}

TEST_CASE("gold loader errors") {
  TempDir tmp;
  CHECK_THROWS_AS(load_gold_dataset(tmp.write("a.xml", "<sentences><sentence>"),
                                    DatasetFormat::kSemevalXml),
                  ParseError);
  const char *bad_term = R"(<sentences><sentence id="7"><text>Nice screen.</text>
    <aspectTerms><aspectTerm term="keyboard" polarity="positive"/></aspectTerms>
    </sentence></sentences>)";
  try {
    load_gold_dataset(tmp.write("b.xml", bad_term), DatasetFormat::kSemevalXml);
    FAIL("expected ValidationError");
  } catch (const ValidationError &e) {
    CHECK(std::string(e.what()).find("7") != std::string::npos);
  }
  CHECK_THROWS_AS(load_gold_dataset(tmp.write("c.jsonl", "{\"text\": 3}\n"),
                                    DatasetFormat::kJsonl),
                  ParseError);
  CHECK_THROWS_AS(parse_dataset_format("csv"), ConfigError);
}

TEST_CASE("minimal JSONL sample keeps its span") {
  TempDir tmp;
  auto s = load_gold_dataset(
      tmp.write("m.jsonl",
                R"({"id":"a","text":"Fast processor.","domain":"laptop",)"
                R"("annotations":[{"term":"processor","polarity":0,"span":[5,14]}],)"
                R"("provenance":"gold"})"
                "\n"),
      DatasetFormat::kJsonl);
  REQUIRE(s.size() == 1);
  CHECK(s[0].annotations[0].span == std::optional<CharSpan>(CharSpan{5, 14}));
  CHECK_FALSE(s[0].is_generated());
}

TEST_CASE("dataset_stats") {
  CHECK(dataset_stats(std::vector<LabeledSample>{}).total() == 0);
  std::vector<LabeledSample> one = {
      make_sample("1", "good screen bad keys", {{"screen", kPos}, {"keys", kNeg}})};
  CHECK(dataset_stats(one).counts == std::array<long, 3>{1, 0, 1});
}

// Oracle: keep a sample unless an earlier sample has the same normalized text
// and the same annotation multiset.
std::vector<LabeledSample> dedup_oracle(const std::vector<LabeledSample> &xs) {
  auto key = [](const LabeledSample &s) {
    std::multiset<std::pair<std::string, int>> bag;
    for (const auto &a : s.annotations) {
      bag.emplace(normalize_text(a.term), polarity_code(a.polarity));
    }
    return std::make_pair(normalize_text(s.sentence.text), bag);
  };
  std::vector<LabeledSample> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    bool dup = false;
    for (std::size_t j = 0; j < i && !dup; ++j) dup = key(xs[i]) == key(xs[j]);
    if (!dup) out.push_back(xs[i]);
  }
  return out;
}

TEST_CASE("deduplicate") {
  auto x = make_sample("x", "Great battery", {{"battery", kPos}});
  auto y = make_sample("y", "Bad screen", {{"screen", kNeg}});
  CHECK(deduplicate(std::vector{x, x}) == std::vector{x});
  CHECK(deduplicate(std::vector{x, y, x}) == std::vector{x, y});

  auto x2 = make_sample("x2", "  great   BATTERY ", {{"Battery", kPos}});
  CHECK(deduplicate(std::vector{x, x2}) == std::vector{x});
  auto x3 = make_sample("x3", "Great battery", {{"battery", kNeg}});
  CHECK(deduplicate(std::vector{x, x3}).size() == 2);

  // Random variants against the pairwise oracle, plus idempotence.
  const char *texts[] = {"Great battery", "great  battery", "GREAT battery ",
                         "Bad battery", "bad Battery"};
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<LabeledSample> xs;
    const std::size_t n = rng.index(8);
    for (std::size_t i = 0; i < n; ++i) {
      auto s = make_sample(std::to_string(i), texts[rng.index(5)],
                           {{"battery", polarity_from_code(static_cast<int>(rng.index(2)))}});
      if (rng.bernoulli(0.3)) s.annotations.push_back({"BATTERY", kNeu, std::nullopt});
      xs.push_back(s);
    }
    const auto d = deduplicate(xs);
    CHECK(d == dedup_oracle(xs));
    CHECK(deduplicate(d) == d);
  }
}

TEST_CASE("emit/load round trip in both formats") {
  LabeledSample g = make_sample("g1", "The <screen> & \"keys\" are fine",
                                {{"<screen>", kNeu}, {"\"keys\"", kPos}});
  g.annotations[0].span = CharSpan{4, 12};
  LabeledSample gen = make_sample("r1-0001", "Caf\xc3\xa9 latte was cold",
                                  {{"caf\xc3\xa9 latte", kNeg}}, "restaurant");
  gen.provenance = GeneratedOrigin{3, testing::make_judgment(7, 8, 6)};
  LabeledSample gen2 = make_sample("r1-0002", "Dull keys", {{"keys", kNeg}});
  gen2.provenance = GeneratedOrigin{1, testing::make_judgment(1, 1, 1, true, false)};
  const std::vector<LabeledSample> xs = {g, gen, gen2};

  TempDir tmp;
  emit_dataset(xs, tmp / "a.jsonl", DatasetFormat::kJsonl);
  CHECK(load_gold_dataset(tmp / "a.jsonl", DatasetFormat::kJsonl) == xs);
  emit_dataset(xs, tmp / "b.jsonl", DatasetFormat::kJsonl);
  CHECK(read_file(tmp / "a.jsonl") == read_file(tmp / "b.jsonl"));

  emit_dataset(xs, tmp / "a.xml", DatasetFormat::kSemevalXml);
  auto back = load_gold_dataset(tmp / "a.xml", DatasetFormat::kSemevalXml);
  REQUIRE(back.size() == xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(back[i].sentence == xs[i].sentence);
    CHECK(back[i].annotations == xs[i].annotations);
  }

  emit_dataset({}, tmp / "e.jsonl", DatasetFormat::kJsonl);
  CHECK(load_gold_dataset(tmp / "e.jsonl", DatasetFormat::kJsonl).empty());
  emit_dataset({}, tmp / "e.xml", DatasetFormat::kSemevalXml);
  CHECK(load_gold_dataset(tmp / "e.xml", DatasetFormat::kSemevalXml).empty());
  tmp.write("plain", "");
  CHECK_THROWS_AS(emit_dataset(xs, tmp / "plain" / "x.jsonl", DatasetFormat::kJsonl),
                  IoError);
}

TEST_CASE("validate_sample") {
  auto s = make_sample("v", "Nice screen", {{"SCREEN", kPos}});
  CHECK_NOTHROW(validate_sample(s));
  s.annotations[0].span = CharSpan{5, 11};
  CHECK_THROWS_AS(validate_sample(s), ValidationError);
  s.annotations[0].term = "screen";
  CHECK_NOTHROW(validate_sample(s));
  s.annotations.clear();
  CHECK_THROWS_AS(validate_sample(s), ValidationError);
  CHECK_THROWS_AS(validate_sample(make_sample("b", "   ", {{"x", kPos}})),
                  ValidationError);
  CHECK_THROWS_AS(QualityScores::from_axes(0, 5, 5), ValidationError);
  CHECK(QualityScores::from_axes(9, 9, 10).overall == 9);
  CHECK(QualityScores::from_axes(5, 5, 6).overall == 5);
  CHECK(QualityScores::from_axes(5, 6, 6).overall == 6);
}

}  // namespace
}  // namespace absagen
