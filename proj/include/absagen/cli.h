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

#ifndef ABSAGEN_CLI_H_
#define ABSAGEN_CLI_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absagen/aspect_pipeline.h"
#include "absagen/corpus_io.h"
#include "absagen/eval_harness.h"
#include "absagen/generator.h"
#include "json.hpp"

namespace absagen {

enum class ProviderMode { kLive, kReplay, kRecord };

// "live", "replay" or "record". Throws ConfigError.
ProviderMode parse_provider_mode(std::string_view name);
std::string_view provider_mode_name(ProviderMode mode);

inline constexpr int kExitOk = 0;
inline constexpr int kExitPipeline = 1;
inline constexpr int kExitUsage = 2;

// Threshold and ratio values visited by the sweep subcommands.
inline constexpr int kSweepThresholds[] = {0, 2, 4, 6, 8};
inline constexpr double kSweepRatios[] = {0.5, 1.0, 1.5, 2.0, 2.5};

struct RunConfig {
  std::filesystem::path corpus;
  std::string domain;
  DemoStrategy strategy;
  // Generation knobs; target_counts, domain and seed are filled per run.
  GenerationConfig generation;
  int threshold = kDefaultThreshold;
  bool strict_threshold = false;
  // Generated-to-original size ratio.
  double ratio = 1.0;
  ProviderMode provider = ProviderMode::kReplay;
  std::filesystem::path fixture;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out = "out";

  // Gold training data: aspect report for extract, target counts for
  // generate, Original regime for eval.
  std::filesystem::path gold;
  DatasetFormat gold_format = DatasetFormat::kJsonl;
  std::filesystem::path test;
  DatasetFormat test_format = DatasetFormat::kJsonl;
  // Generated training data for eval (JSONL).
  std::filesystem::path generated;
  // Precomputed aspect pool; generate runs extraction when unset.
  std::filesystem::path pool;

  std::filesystem::path demo_bank;
  std::filesystem::path prompts_dir;
  std::filesystem::path pos_lexicon;
  std::filesystem::path sentiment_lexicon;
  std::filesystem::path live_config;
  bool extend = true;
  double theta = 0.1;
  int max_in_flight = 4;
  TrainOptions train;

  // Command-specific checks; `command` is the subcommand name. Throws
  // ConfigError.
  void validate(std::string_view command) const;
  // Every field except `out`.
  nlohmann::json to_json() const;
  // First 16 hex digits of SHA-256 over to_json().dump().
  std::string hash() const;
  std::uint64_t effective_seed() const { return seed.value_or(0); }
};

// round(ratio * count) per polarity.
PolarityCounts scale_targets(const PolarityCounts &original, double ratio);

// Each command writes under `dir` and returns nothing; failures throw.
void cmd_extract(const RunConfig &config, const std::filesystem::path &dir);
void cmd_generate(const RunConfig &config, const std::filesystem::path &dir);
void cmd_eval(const RunConfig &config, const std::filesystem::path &dir);
void cmd_sweep_threshold(const RunConfig &config, const std::filesystem::path &dir);
void cmd_sweep_ratio(const RunConfig &config, const std::filesystem::path &dir);
void cmd_full(const RunConfig &config, const std::filesystem::path &dir);

// Parses argv, runs the subcommand under <out>/<config hash>/ and returns the
// exit code (0 ok, 1 pipeline failure, 2 usage or configuration error).
int run_cli(int argc, char **argv);

}  // namespace absagen

#endif  // ABSAGEN_CLI_H_
