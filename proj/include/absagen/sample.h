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

#ifndef ABSAGEN_SAMPLE_H_
#define ABSAGEN_SAMPLE_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace absagen {

// Sentiment polarity with the canonical integer codes used on disk.
enum class Polarity : int { kPositive = 0, kNeutral = 1, kNegative = 2 };

inline constexpr std::array<Polarity, 3> kAllPolarities = {
    Polarity::kPositive, Polarity::kNeutral, Polarity::kNegative};

inline int polarity_code(Polarity p) { return static_cast<int>(p); }

// Throws ParseError for codes outside {0, 1, 2}.
Polarity polarity_from_code(int code);

std::string_view polarity_name(Polarity p);

// Accepts "positive", "neutral", "negative" (any case). Throws ParseError.
Polarity polarity_from_name(std::string_view name);

struct Sentence {
  std::string id;
  std::string text;
  std::string domain;

  bool operator==(const Sentence &) const = default;
};

// Half-open code point offsets into the owning sentence text.
struct CharSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const CharSpan &) const = default;
};

struct AspectAnnotation {
  std::string term;
  Polarity polarity = Polarity::kNeutral;
  std::optional<CharSpan> span;

  bool operator==(const AspectAnnotation &) const = default;
};

// The three quality axes scored by the discriminator, each 1..10.
struct QualityScores {
  int syntactic = 1;
  int lexical = 1;
  int realism = 1;
  int overall = 1;

  // overall = round((syntactic + lexical + realism) / 3). Throws
  // ValidationError when an axis is outside 1..10.
  static QualityScores from_axes(int syntactic, int lexical, int realism);

  bool operator==(const QualityScores &) const = default;
};

// Discriminator verdict. Samples that fail a relevance check are never
// scored, so `scores` is empty for them.
struct Judgment {
  bool domain_relevant = false;
  bool sentiment_relevant = false;
  std::optional<QualityScores> scores;

  bool relevant() const { return domain_relevant && sentiment_relevant; }
  // 0 when unscored.
  int overall() const { return scores ? scores->overall : 0; }

  bool operator==(const Judgment &) const = default;
};

struct GoldOrigin {
  bool operator==(const GoldOrigin &) const = default;
};

struct GeneratedOrigin {
  int round = 0;
  std::optional<Judgment> judgment;

  bool operator==(const GeneratedOrigin &) const = default;
};

using Provenance = std::variant<GoldOrigin, GeneratedOrigin>;

struct LabeledSample {
  Sentence sentence;
  std::vector<AspectAnnotation> annotations;
  Provenance provenance = GoldOrigin{};

  bool is_generated() const {
    return std::holds_alternative<GeneratedOrigin>(provenance);
  }

  bool operator==(const LabeledSample &) const = default;
};

// Checks the sample-level invariants: non-blank text, at least one
// annotation, every term contained case-insensitively in the text, and every
// span slicing exactly to its term. Throws ValidationError naming the id.
void validate_sample(const LabeledSample &sample);

}  // namespace absagen

#endif  // ABSAGEN_SAMPLE_H_
