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

#include "absagen/sample.h"

#include <cmath>

#include "absagen/error.h"
#include "absagen/text.h"

namespace absagen {

Polarity polarity_from_code(int code) {
  switch (code) {
    case 0: return Polarity::kPositive;
    case 1: return Polarity::kNeutral;
    case 2: return Polarity::kNegative;
  }
  throw ParseError("invalid polarity code " + std::to_string(code));
}

std::string_view polarity_name(Polarity p) {
  switch (p) {
    case Polarity::kPositive: return "positive";
    case Polarity::kNeutral: return "neutral";
    case Polarity::kNegative: return "negative";
  }
  return "unknown";
}

Polarity polarity_from_name(std::string_view name) {
  const std::string n = to_lower(trim(name));
  if (n == "positive") return Polarity::kPositive;
  if (n == "neutral") return Polarity::kNeutral;
  if (n == "negative") return Polarity::kNegative;
  throw ParseError("invalid polarity name '" + std::string(name) + "'");
}

QualityScores QualityScores::from_axes(int syntactic, int lexical,
                                       int realism) {
  for (int v : {syntactic, lexical, realism}) {
    if (v < 1 || v > 10) {
      throw ValidationError("quality score " + std::to_string(v) +
                            " outside 1..10");
    }
  }
  QualityScores s;
  s.syntactic = syntactic;
  s.lexical = lexical;
  s.realism = realism;
  // A sum of three integers over 3 never lands on .5, so no tie rule needed.
  s.overall = static_cast<int>(
      std::lround(static_cast<double>(syntactic + lexical + realism) / 3.0));
  return s;
}

void validate_sample(const LabeledSample &sample) {
  const std::string &id = sample.sentence.id;
  if (trim(sample.sentence.text).empty()) {
    throw ValidationError("sample '" + id + "': empty text");
  }
  if (sample.annotations.empty()) {
    throw ValidationError("sample '" + id + "': no annotations");
  }
  for (const auto &a : sample.annotations) {
    if (!contains_ci(sample.sentence.text, a.term)) {
      throw ValidationError("sample '" + id + "': aspect '" + a.term +
                            "' not found in sentence");
    }
    if (a.span) {
      auto slice = utf8_slice(sample.sentence.text, a.span->start, a.span->end);
      if (!slice || *slice != a.term) {
        throw ValidationError("sample '" + id + "': span [" +
                              std::to_string(a.span->start) + "," +
                              std::to_string(a.span->end) +
                              ") does not match aspect '" + a.term + "'");
      }
    }
  }
}

}  // namespace absagen
