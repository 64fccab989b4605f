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

#include "absagen/lexicon.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>

#include "absagen/error.h"
#include "absagen/text.h"

namespace absagen {

std::vector<std::pair<std::string, std::string>> read_tsv_lexicon(
    const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read lexicon " + path.string());
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t tab = t.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": expected word<TAB>value");
    }
    out.emplace_back(to_lower(trim(t.substr(0, tab))), trim(t.substr(tab + 1)));
  }
  return out;
}

namespace {

// Candidate singular forms, most specific first.
std::vector<std::string> singulars(std::string_view w) {
  std::vector<std::string> out;
  if (w.size() > 3 && w.ends_with("ies")) {
    out.push_back(std::string(w.substr(0, w.size() - 3)) + "y");
  }
  if (w.size() > 3 && (w.ends_with("ches") || w.ends_with("shes") ||
                       w.ends_with("sses") || w.ends_with("xes") ||
                       w.ends_with("zes"))) {
    out.push_back(std::string(w.substr(0, w.size() - 2)));
  }
  if (w.size() > 2 && w.ends_with("s") && !w.ends_with("ss")) {
    out.push_back(std::string(w.substr(0, w.size() - 1)));
  }
  return out;
}

template <typename Map>
auto find_word(const Map &m, std::string_view w) {
  auto it = m.find(w);
  if (it != m.end()) return it;
  for (const auto &form : singulars(w)) {
    it = m.find(form);
    if (it != m.end()) return it;
  }
  return m.end();
}

bool is_alpha_word(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u >= 0x80 || std::isalpha(u) || c == '-' || c == '\'';
  }) && std::any_of(w.begin(), w.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u >= 0x80 || std::isalpha(u);
  });
}

}  // namespace

PosLexicon PosLexicon::load(const std::filesystem::path &path) {
  PosLexicon lex;
  for (const auto &[word, tag] : read_tsv_lexicon(path)) lex.add(word, tag);
  return lex;
}

void PosLexicon::add(std::string_view word, std::string_view tag) {
  tags_[to_lower(word)].insert(std::string(tag));
}

bool PosLexicon::contains(std::string_view word) const {
  return tags_.find(to_lower(word)) != tags_.end();
}

bool PosLexicon::is_noun(std::string_view word) const {
  const std::string w = to_lower(word);
  auto it = find_word(tags_, w);
  if (it == tags_.end()) return is_alpha_word(w);
  return std::any_of(it->second.begin(), it->second.end(), [](const auto &tag) {
    return tag.starts_with("NN") || to_lower(tag) == "noun";
  });
}

SentimentLexicon SentimentLexicon::load(const std::filesystem::path &path) {
  SentimentLexicon lex;
  for (const auto &[word, value] : read_tsv_lexicon(path)) {
    double score = 0;
    const char *b = value.data();
    const char *e = b + value.size();
    auto [ptr, ec] = std::from_chars(b, e, score);
    if (ec != std::errc() || ptr != e || !std::isfinite(score)) {
      throw ParseError(path.string() + ": bad score '" + value + "' for '" +
                       word + "'");
    }
    lex.add(word, score);
  }
  return lex;
}

void SentimentLexicon::add(std::string_view word, double score) {
  scores_[to_lower(word)] = score;
}

double SentimentLexicon::score(std::string_view word) const {
  const std::string w = to_lower(word);
  auto it = find_word(scores_, w);
  return it == scores_.end() ? 0.0 : it->second;
}

double SentimentLexicon::score_phrase(std::string_view phrase) const {
  double total = 0;
  for (const auto &token : tokenize(phrase)) total += score(token);
  return total;
}

}  // namespace absagen
