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

#include "absagen/prompt_template.h"

#include <algorithm>
#include <cctype>

#include "absagen/corpus_io.h"
#include "absagen/error.h"

namespace absagen {

namespace {

bool is_slot_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

// Calls on_text(text) / on_slot(name) in order. Throws on malformed braces.
template <typename TextFn, typename SlotFn>
void scan(const std::string &name, const std::string &body, TextFn on_text,
          SlotFn on_slot) {
  std::size_t i = 0;
  while (i < body.size()) {
    const std::size_t open = body.find_first_of("{}", i);
    if (open == std::string::npos) {
      on_text(std::string_view(body).substr(i));
      return;
    }
    if (body[open] == '}') {
      throw TemplateError("template '" + name + "': stray '}'", "");
    }
    on_text(std::string_view(body).substr(i, open - i));
    const std::size_t close = body.find('}', open);
    if (close == std::string::npos) {
      throw TemplateError("template '" + name + "': unterminated '{'", "");
    }
    const std::string slot = body.substr(open + 1, close - open - 1);
    if (slot.empty() || !std::all_of(slot.begin(), slot.end(), is_slot_char)) {
      throw TemplateError("template '" + name + "': bad slot '{" + slot + "}'",
                          slot);
    }
    on_slot(slot);
    i = close + 1;
  }
}

}  // namespace

PromptTemplate::PromptTemplate(std::string name, std::string body)
    : name_(std::move(name)), body_(std::move(body)) {
  scan(name_, body_, [](std::string_view) {},
       [this](const std::string &slot) {
         if (std::find(slots_.begin(), slots_.end(), slot) == slots_.end()) {
           slots_.push_back(slot);
         }
       });
}

std::string render(const PromptTemplate &tmpl, const SlotMap &slots) {
  for (const auto &slot : tmpl.slots()) {
    if (!slots.count(slot)) {
      throw TemplateError(
          "template '" + tmpl.name() + "': missing slot '" + slot + "'", slot);
    }
  }
  std::string out;
  scan(tmpl.name(), tmpl.body(), [&](std::string_view text) { out += text; },
       [&](const std::string &slot) { out += slots.at(slot); });
  return out;
}

void TemplateSet::set(PromptTemplate tmpl) {
  const std::string name = tmpl.name();
  templates_.insert_or_assign(name, std::move(tmpl));
}

const PromptTemplate &TemplateSet::get(const std::string &name) const {
  auto it = templates_.find(name);
  if (it == templates_.end()) {
    throw TemplateError("no template named '" + name + "'", "");
  }
  return it->second;
}

std::vector<std::string> TemplateSet::names() const {
  std::vector<std::string> out;
  for (const auto &[name, t] : templates_) out.push_back(name);
  return out;
}

void TemplateSet::load_overrides(const std::filesystem::path &dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw IoError("prompt directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto &entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto &f : files) set(PromptTemplate(f.stem().string(), read_file(f)));
}

}  // namespace absagen
