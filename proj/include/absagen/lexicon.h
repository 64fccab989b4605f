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

#ifndef ABSAGEN_LEXICON_H_
#define ABSAGEN_LEXICON_H_

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace absagen {

// "word<TAB>value" lines. Blank lines and lines starting with '#' are
// skipped. Words are lowercased. Throws IoError / ParseError.
std::vector<std::pair<std::string, std::string>> read_tsv_lexicon(
    const std::filesystem::path &path);

// Word -> part-of-speech tags (Penn-style: NN, NNS, VB, JJ, IN, CC, ...).
class PosLexicon {
 public:
  static PosLexicon load(const std::filesystem::path &path);

  void add(std::string_view word, std::string_view tag);
  bool contains(std::string_view word) const;

  // True when any tag of the word is a noun tag. A word missing from the
  // lexicon falls back to its singular forms ("ies" -> "y", "ches"/"xes"/...
  // -> drop "es", then drop "s"); if that
  // is missing too, alphabetic words count as nouns and anything else not.
  bool is_noun(std::string_view word) const;

  std::size_t size() const { return tags_.size(); }

 private:
  std::map<std::string, std::set<std::string>, std::less<>> tags_;
};

// Word -> real polarity score (positive > 0 > negative).
class SentimentLexicon {
 public:
  static SentimentLexicon load(const std::filesystem::path &path);

  void add(std::string_view word, double score);
  // 0 for unknown words; falls back to the singular form like PosLexicon.
  double score(std::string_view word) const;
  // Sum of token scores.
  double score_phrase(std::string_view phrase) const;

 private:
  std::map<std::string, double, std::less<>> scores_;
};

}  // namespace absagen

#endif  // ABSAGEN_LEXICON_H_
