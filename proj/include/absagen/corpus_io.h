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

#ifndef ABSAGEN_CORPUS_IO_H_
#define ABSAGEN_CORPUS_IO_H_

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absagen/sample.h"
#include "json.hpp"

namespace absagen {

enum class DatasetFormat { kSemevalXml, kJsonl };

// "semeval-xml" or "jsonl". Throws ConfigError.
DatasetFormat parse_dataset_format(std::string_view name);

// Per-polarity annotation counts, indexed by polarity code.
struct PolarityCounts {
  std::array<long, 3> counts{0, 0, 0};

  long &operator[](Polarity p) { return counts[polarity_code(p)]; }
  long operator[](Polarity p) const { return counts[polarity_code(p)]; }
  long total() const { return counts[0] + counts[1] + counts[2]; }

  bool operator==(const PolarityCounts &) const = default;
};

struct DatasetStats {
  PolarityCounts train;
  PolarityCounts test;

  bool operator==(const DatasetStats &) const = default;
};

// One sentence per line. Blank lines are skipped; ids are 1-based line
// numbers. Throws IoError or DecodeError.
std::vector<Sentence> load_unlabeled_corpus(const std::filesystem::path &path,
                                            const std::string &domain);

// Loads a gold ABSA file. SemEval XML accepts both the 2014 schema
// (aspectTerms/aspectTerm) and the 2015/16 schema (Opinions/Opinion).
// Instances labelled "conflict" are removed; a sentence in which the same
// aspect carries two different polarities is dropped entirely. Sentences
// left without annotations are skipped. `domain` fills Sentence::domain for
// XML input (JSONL carries its own).
std::vector<LabeledSample> load_gold_dataset(const std::filesystem::path &path,
                                             DatasetFormat format,
                                             const std::string &domain = "");

// Counts each annotation once under its polarity.
PolarityCounts dataset_stats(std::span<const LabeledSample> samples);

DatasetStats dataset_stats(std::span<const LabeledSample> train,
                           std::span<const LabeledSample> test);

// Order-preserving; keeps the first of each group of samples whose
// normalized text and annotation multiset (normalized term, polarity) agree.
std::vector<LabeledSample> deduplicate(std::span<const LabeledSample> samples);

// Writes samples so that load_gold_dataset reads them back unchanged. Output
// bytes depend only on the input. XML carries text, annotations and domain
// but not provenance.
void emit_dataset(std::span<const LabeledSample> samples,
                  const std::filesystem::path &path, DatasetFormat format);

std::string render_dataset(std::span<const LabeledSample> samples,
                           DatasetFormat format);

nlohmann::json judgment_to_json(const Judgment &judgment);
Judgment judgment_from_json(const nlohmann::json &j);
nlohmann::json sample_to_json(const LabeledSample &sample);
LabeledSample sample_from_json(const nlohmann::json &j);

// Whole-file helpers shared by the other modules.
std::string read_file(const std::filesystem::path &path);
// Writes via a sibling temporary and rename. Throws IoError.
void write_file(const std::filesystem::path &path, std::string_view content);

}  // namespace absagen

#endif  // ABSAGEN_CORPUS_IO_H_
