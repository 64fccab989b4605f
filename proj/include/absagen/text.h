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

#ifndef ABSAGEN_TEXT_H_
#define ABSAGEN_TEXT_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace absagen {

// ASCII lowercase. Bytes >= 0x80 are left alone so UTF-8 stays intact.
std::string to_lower(std::string_view s);

std::string trim(std::string_view s);

// Lowercase, trim and collapse internal whitespace runs to one space.
std::string normalize_text(std::string_view s);

bool is_valid_utf8(std::string_view s);

// Number of code points in a valid UTF-8 string.
std::size_t utf8_length(std::string_view s);

// Slice by code point offsets [start, end). Returns nullopt when out of range.
std::optional<std::string> utf8_slice(std::string_view s, std::size_t start,
                                      std::size_t end);

// Code point offset of the first case-insensitive occurrence of needle.
std::optional<std::size_t> find_ci(std::string_view haystack,
                                   std::string_view needle);

inline bool contains_ci(std::string_view haystack, std::string_view needle) {
  return find_ci(haystack, needle).has_value();
}

// Lowercased word tokens; splits on whitespace and ASCII punctuation, keeping
// in-word apostrophes and hyphens.
std::vector<std::string> tokenize(std::string_view s);

// Whitespace split without any other processing.
std::vector<std::string> split_whitespace(std::string_view s);

}  // namespace absagen

#endif  // ABSAGEN_TEXT_H_
