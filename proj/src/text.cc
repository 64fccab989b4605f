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

#include "absagen/text.h"

#include <algorithm>
#include <cctype>

namespace absagen {

namespace {

bool is_space(unsigned char c) { return std::isspace(c) != 0; }

bool is_word_char(unsigned char c) { return c >= 0x80 || std::isalnum(c); }

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char &c : out) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 0x80) c = static_cast<char>(std::tolower(u));
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string normalize_text(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return to_lower(out);
}

bool is_valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t n;
    char32_t cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      n = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      n = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      n = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    for (std::size_t k = 1; k <= n; ++k) {
      if (i + k >= s.size()) return false;
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Overlong forms, surrogates and out-of-range code points.
    if ((n == 1 && cp < 0x80) || (n == 2 && cp < 0x800) ||
        (n == 3 && cp < 0x10000) || cp > 0x10FFFF ||
        (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += n + 1;
  }
  return true;
}

std::size_t utf8_length(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  }));
}

namespace {

// Byte offset of code point index cp, or npos past the end.
std::size_t byte_offset(std::string_view s, std::size_t cp) {
  std::size_t seen = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) == 0x80) continue;
    if (seen == cp) return i;
    ++seen;
  }
  return seen == cp ? s.size() : std::string_view::npos;
}

}  // namespace

std::optional<std::string> utf8_slice(std::string_view s, std::size_t start,
                                      std::size_t end) {
  if (start > end) return std::nullopt;
  const std::size_t b = byte_offset(s, start);
  const std::size_t e = byte_offset(s, end);
  if (b == std::string_view::npos || e == std::string_view::npos) {
    return std::nullopt;
  }
  return std::string(s.substr(b, e - b));
}

std::optional<std::size_t> find_ci(std::string_view haystack,
                                   std::string_view needle) {
  if (needle.empty()) return std::nullopt;
  const std::string h = to_lower(haystack);
  const std::string n = to_lower(needle);
  const std::size_t pos = h.find(n);
  if (pos == std::string::npos) return std::nullopt;
  return utf8_length(std::string_view(h).substr(0, pos));
}

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    // Apostrophes and hyphens only glue word characters together.
    while (!current.empty() &&
           (current.back() == '\'' || current.back() == '-')) {
      current.pop_back();
    }
    if (!current.empty()) tokens.push_back(to_lower(current));
    current.clear();
  };
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_word_char(c)) {
      current.push_back(ch);
    } else if ((ch == '\'' || ch == '-') && !current.empty()) {
      current.push_back(ch);
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace absagen
