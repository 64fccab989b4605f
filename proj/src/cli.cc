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

#include "absagen/cli.h"

#include <openssl/evp.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>

#include "CLI11.hpp"
#include "absagen/error.h"
#include "absagen/lexicon.h"
#include "absagen/llm_gateway.h"
#include "absagen/prompt_template.h"
#include "absagen/random.h"

namespace absagen {

namespace fs = std::filesystem;
using nlohmann::json;

ProviderMode parse_provider_mode(std::string_view name) {
  if (name == "live") return ProviderMode::kLive;
  if (name == "replay") return ProviderMode::kReplay;
  if (name == "record") return ProviderMode::kRecord;
  throw ConfigError("unknown provider mode '" + std::string(name) +
                    "' (expected live, replay or record)");
}

std::string_view provider_mode_name(ProviderMode mode) {
  switch (mode) {
    case ProviderMode::kLive: return "live";
    case ProviderMode::kReplay: return "replay";
    case ProviderMode::kRecord: return "record";
  }
  return "replay";
}

PolarityCounts scale_targets(const PolarityCounts &original, double ratio) {
  PolarityCounts out;
  for (std::size_t i = 0; i < out.counts.size(); ++i) {
    out.counts[i] = std::lround(ratio * static_cast<double>(original.counts[i]));
  }
  return out;
}

namespace {

std::string format_name(DatasetFormat f) {
  return f == DatasetFormat::kSemevalXml ? "semeval-xml" : "jsonl";
}

void require_file(const fs::path &p, const char *flag) {
  if (p.empty()) throw ConfigError(std::string(flag) + " is required");
  if (!fs::exists(p)) {
    throw ConfigError(std::string(flag) + " path does not exist: " + p.string());
  }
}

void check_optional_file(const fs::path &p, const char *flag) {
  if (!p.empty() && !fs::exists(p)) {
    throw ConfigError(std::string(flag) + " path does not exist: " + p.string());
  }
}

}  // namespace

void RunConfig::validate(std::string_view command) const {
  if (!(ratio > 0)) throw ConfigError("--ratio must be positive");
  if (threshold < 0 || threshold > 10) {
    throw ConfigError("--threshold must lie in 0..10");
  }
  strategy.validate();
  GenerationConfig g = generation;
  g.target_counts = {};
  g.validate();
  if (max_in_flight <= 0) throw ConfigError("--max-in-flight must be positive");
  if (train.epochs <= 0 || !(train.learning_rate > 0)) {
    throw ConfigError("training needs positive epochs and learning rate");
  }

  const bool uses_llm = command != "eval";
  const bool needs_pool = command == "generate" || command == "sweep-threshold" ||
                          command == "sweep-ratio";
  if (uses_llm) {
    if (domain.empty()) throw ConfigError("--domain is required");
    if (provider == ProviderMode::kReplay) {
      require_file(fixture, "--fixture");
      if (!seed) throw ConfigError("--seed is mandatory in replay mode");
    } else if (provider == ProviderMode::kRecord && fixture.empty()) {
      throw ConfigError("--fixture is required in record mode");
    }
    check_optional_file(live_config, "--live-config");
    check_optional_file(prompts_dir, "--prompts");
  }
  if (command == "extract" || command == "full") {
    require_file(corpus, "--corpus");
  } else if (needs_pool) {
    if (pool.empty() && corpus.empty()) {
      throw ConfigError("--pool or --corpus is required");
    }
    check_optional_file(pool, "--pool");
    check_optional_file(corpus, "--corpus");
  }
  if (command != "extract") require_file(gold, "--gold");
  else check_optional_file(gold, "--gold");
  if (command == "eval") {
    require_file(generated, "--generated");
    require_file(test, "--test");
  } else if (command == "sweep-threshold") {
    require_file(test, "--test");
  } else {
    check_optional_file(test, "--test");
  }
  if (uses_llm && (!corpus.empty() && pool.empty())) {
    require_file(demo_bank, "--demo-bank");
    require_file(pos_lexicon, "--pos-lexicon");
    require_file(sentiment_lexicon, "--sentiment-lexicon");
  }
}

json RunConfig::to_json() const {
  return {
      {"corpus", corpus.generic_string()},
      {"domain", domain},
      {"strategy", {{"mode", demo_mode_name(strategy.mode)}, {"k", strategy.k}}},
      {"generation",
       {{"rounds", generation.rounds},
        {"batch_per_round", generation.batch_per_round},
        {"feedback_k", generation.feedback_k},
        {"feedback_capacity", generation.feedback_capacity},
        {"strategy_mix", generation.strategy_mix},
        {"aspects_per_multi", generation.aspects_per_multi},
        {"min_words", generation.min_words},
        {"max_words", generation.max_words},
        {"expected_keep_rate", generation.expected_keep_rate}}},
      {"threshold", threshold},
      {"strict_threshold", strict_threshold},
      {"ratio", ratio},
      {"provider", provider_mode_name(provider)},
      {"fixture", fixture.generic_string()},
      {"seed", seed ? json(*seed) : json(nullptr)},
      {"gold", gold.generic_string()},
      {"gold_format", format_name(gold_format)},
      {"test", test.generic_string()},
      {"test_format", format_name(test_format)},
      {"generated", generated.generic_string()},
      {"pool", pool.generic_string()},
      {"demo_bank", demo_bank.generic_string()},
      {"prompts", prompts_dir.generic_string()},
      {"pos_lexicon", pos_lexicon.generic_string()},
      {"sentiment_lexicon", sentiment_lexicon.generic_string()},
      {"live_config", live_config.generic_string()},
      {"extend", extend},
      {"theta", theta},
      {"max_in_flight", max_in_flight},
      {"train",
       {{"epochs", train.epochs},
        {"learning_rate", train.learning_rate},
        {"batch_size", train.batch_size},
        {"window", train.window}}},
  };
}

namespace {

std::string short_digest(const std::string &text) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr);
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < 8 && i < len; ++i) {
    std::snprintf(buf, sizeof(buf), "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

}  // namespace

std::string RunConfig::hash() const { return short_digest(to_json().dump()); }

// ---------------------------------------------------------------------------
// Shared stages

namespace {

// Seed streams for the independent random consumers of one run.
constexpr std::uint64_t kDemoStream = 1;
constexpr std::uint64_t kGenerationStream = 2;
constexpr std::uint64_t kTrainStream = 3;

struct Session {
  TemplateSet templates = TemplateSet::builtin();
  std::shared_ptr<CompletionProvider> provider;
  std::unique_ptr<Gateway> gateway;
};

std::shared_ptr<CompletionProvider> make_live(const RunConfig &config) {
  LiveConfig live =
      config.live_config.empty() ? LiveConfig{} : load_live_config(config.live_config);
  auto transport = make_http_transport(live.base_url, live.timeout_seconds);
  return std::make_shared<LiveProvider>(live, std::move(transport));
}

std::unique_ptr<Session> open_session(const RunConfig &config) {
  auto s = std::make_unique<Session>();
  if (!config.prompts_dir.empty()) s->templates.load_overrides(config.prompts_dir);
  switch (config.provider) {
    case ProviderMode::kReplay:
      s->provider = std::make_shared<ReplayProvider>(
          std::make_shared<const Fixture>(Fixture::load(config.fixture)));
      break;
    case ProviderMode::kRecord:
      s->provider = std::make_shared<RecordingProvider>(make_live(config), config.fixture);
      break;
    case ProviderMode::kLive:
      s->provider = make_live(config);
      break;
  }
  s->gateway = std::make_unique<Gateway>(s->provider, config.max_in_flight);
  return s;
}

void write_json(const fs::path &path, const json &j) {
  write_file(path, j.dump(2) + "\n");
}

void write_jsonl(const fs::path &path, const std::vector<json> &records) {
  std::string out;
  for (const auto &r : records) out += r.dump() + "\n";
  write_file(path, out);
}

json aspect_list(const AspectSet &s) { return json(std::vector<std::string>(s.begin(), s.end())); }

json report_json(const AspectEvalReport &r) {
  return {{"precision", r.precision}, {"recall", r.recall}, {"f1", r.f1}};
}

AspectSet gold_aspects(std::span<const LabeledSample> gold) {
  AspectSet out;
  for (const auto &s : gold) {
    for (const auto &a : s.annotations) {
      std::string n = normalize_aspect(a.term);
      if (!n.empty()) out.insert(std::move(n));
    }
  }
  return out;
}

std::vector<LabeledSample> load_gold(const RunConfig &config) {
  return load_gold_dataset(config.gold, config.gold_format, config.domain);
}

AspectPool run_extraction(const RunConfig &config, Session &session,
                          const fs::path &dir) {
  const auto corpus = load_unlabeled_corpus(config.corpus, config.domain);
  const auto bank = load_demo_bank(config.demo_bank);
  const auto demos = select_demos(bank, config.strategy, config.domain,
                                  derive_seed(config.effective_seed(), kDemoStream));
  const auto pos = PosLexicon::load(config.pos_lexicon);
  const auto sentiment = SentimentLexicon::load(config.sentiment_lexicon);

  AspectPipeline pipeline(*session.gateway, session.templates, pos, sentiment,
                          config.theta);
  const auto result = pipeline.run(corpus, config.strategy, demos, config.domain,
                                   config.extend);
  if (!result.pool.invariants_hold()) {
    throw PipelineError("aspect pool violates its partition invariants");
  }

  json demo_json = json::array();
  for (const auto &d : demos) demo_json.push_back(d.sentence);
  write_json(dir / "aspects.json",
             {{"extracted", aspect_list(result.extracted)},
              {"filtered", aspect_list(result.filtered)},
              {"extended", aspect_list(result.extended)},
              {"demonstrations", demo_json},
              {"sentences", result.stats.sentences},
              {"skipped", result.stats.skipped}});
  write_json(dir / "pool.json", result.pool.to_json());

  if (!config.gold.empty()) {
    const auto gold = load_gold(config);
    const AspectSet truth = gold_aspects(gold);
    write_json(dir / "aspect_report.json",
               {{"gold_size", truth.size()},
                {"extracted", report_json(evaluate_aspects(result.extracted, truth))},
                {"filtered", report_json(evaluate_aspects(result.filtered, truth))},
                {"extended", report_json(evaluate_aspects(result.extended, truth))}});
  }
  return result.pool;
}

AspectPool obtain_pool(const RunConfig &config, Session &session, const fs::path &dir) {
  if (config.pool.empty()) return run_extraction(config, session, dir);
  AspectPool pool = AspectPool::from_json(json::parse(read_file(config.pool)));
  write_json(dir / "pool.json", pool.to_json());
  return pool;
}

GenerationResult run_generation(const RunConfig &config, Session &session,
                                const AspectPool &pool, const fs::path &dir) {
  const auto gold = load_gold(config);
  GenerationConfig g = config.generation;
  g.target_counts = scale_targets(dataset_stats(gold), config.ratio);
  g.domain = config.domain;
  g.seed = derive_seed(config.effective_seed(), kGenerationStream);
  g.validate();

  Discriminator discriminator(
      *session.gateway, session.templates, config.domain,
      {config.threshold, config.strict_threshold, g.length_hint()});
  Generator generator(*session.gateway, session.templates, g);
  fs::create_directories(dir);

  json targets = {{"positive", g.target_counts[Polarity::kPositive]},
                  {"neutral", g.target_counts[Polarity::kNeutral]},
                  {"negative", g.target_counts[Polarity::kNegative]}};
  GenerationResult result;
  try {
    result = generator.run_iterative_generation(pool, discriminator);
  } catch (const GenerationError &e) {
    json stats = e.stats().to_json();
    stats["targets"] = targets;
    stats["rejected"] = e.rejected();
    write_json(dir / "generation_stats.json", stats);
    throw;
  }

  write_file(dir / "kept.jsonl", render_dataset(result.kept, DatasetFormat::kJsonl));
  write_file(dir / "rejected.jsonl",
             render_dataset(result.rejected, DatasetFormat::kJsonl));
  std::vector<json> rounds, judgments;
  for (const auto &r : result.log) rounds.push_back(r.to_json());
  for (const auto &[judged, kept] : result.judgments) {
    judgments.push_back(judgment_log_record(judged, kept));
  }
  write_jsonl(dir / "round_log.jsonl", rounds);
  write_jsonl(dir / "judgment_log.jsonl", judgments);
  json stats = result.stats.to_json();
  stats["targets"] = targets;
  stats["kept_counts"] = dataset_stats(result.kept).counts;
  write_json(dir / "generation_stats.json", stats);
  return result;
}

TrainOptions train_options(const RunConfig &config) {
  TrainOptions t = config.train;
  t.seed = derive_seed(config.effective_seed(), kTrainStream);
  return t;
}

json diversity_json(std::span<const LabeledSample> samples) {
  const DiversityMetrics d = diversity_metrics(samples);
  return {{"distinct_1", d.distinct_1}, {"distinct_2", d.distinct_2}};
}

RegimeTable run_eval(const RunConfig &config, std::span<const LabeledSample> generated,
                     const fs::path &dir) {
  const auto original = load_gold(config);
  const auto test = load_gold_dataset(config.test, config.test_format, config.domain);
  const RegimeTable table = compare_regimes(original, generated, test,
                                            train_options(config));
  fs::create_directories(dir);
  write_json(dir / "regime_report.json",
             {{"regimes", table.to_json()},
              {"sizes",
               {{"original", original.size()},
                {"generated", generated.size()},
                {"test", test.size()}}},
              {"diversity",
               {{"original", diversity_json(original)},
                {"generated", diversity_json(generated)}}}});
  write_file(dir / "regime_report.txt", table.to_text());
  return table;
}

std::string ratio_label(double r) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "ratio-%.1f", r);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Commands

void cmd_extract(const RunConfig &config, const fs::path &dir) {
  config.validate("extract");
  fs::create_directories(dir);
  auto session = open_session(config);
  run_extraction(config, *session, dir);
}

void cmd_generate(const RunConfig &config, const fs::path &dir) {
  config.validate("generate");
  fs::create_directories(dir);
  auto session = open_session(config);
  const AspectPool pool = obtain_pool(config, *session, dir);
  run_generation(config, *session, pool, dir);
}

void cmd_eval(const RunConfig &config, const fs::path &dir) {
  config.validate("eval");
  const auto generated = load_gold_dataset(config.generated, DatasetFormat::kJsonl,
                                           config.domain);
  run_eval(config, generated, dir);
}

void cmd_sweep_threshold(const RunConfig &config, const fs::path &dir) {
  config.validate("sweep-threshold");
  fs::create_directories(dir);
  auto session = open_session(config);
  const AspectPool pool = obtain_pool(config, *session, dir);
  json summary = json::array();
  for (int t : kSweepThresholds) {
    RunConfig c = config;
    c.threshold = t;
    const fs::path sub = dir / ("threshold-" + std::to_string(t));
    const auto result = run_generation(c, *session, pool, sub);
    json row = {{"threshold", t},
                {"kept", result.kept.size()},
                {"generated_accuracy", nullptr},
                {"generated_macro_f1", nullptr},
                {"mixed_accuracy", nullptr},
                {"mixed_macro_f1", nullptr}};
    // Nothing to train on when every candidate was rejected.
    if (!result.kept.empty()) {
      const RegimeTable table = run_eval(c, result.kept, sub);
      row["generated_accuracy"] = table.generated.accuracy;
      row["generated_macro_f1"] = table.generated.macro_f1;
      row["mixed_accuracy"] = table.mixed.accuracy;
      row["mixed_macro_f1"] = table.mixed.macro_f1;
    }
    summary.push_back(row);
  }
  write_json(dir / "sweep.json", summary);
}

void cmd_sweep_ratio(const RunConfig &config, const fs::path &dir) {
  config.validate("sweep-ratio");
  fs::create_directories(dir);
  auto session = open_session(config);
  const AspectPool pool = obtain_pool(config, *session, dir);
  json summary = json::array();
  for (double r : kSweepRatios) {
    RunConfig c = config;
    c.ratio = r;
    const fs::path sub = dir / ratio_label(r);
    const auto result = run_generation(c, *session, pool, sub);
    json row = {{"ratio", r}, {"kept", result.kept.size()}};
    if (!c.test.empty() && !result.kept.empty()) {
      const RegimeTable table = run_eval(c, result.kept, sub);
      row["mixed_accuracy"] = table.mixed.accuracy;
      row["mixed_macro_f1"] = table.mixed.macro_f1;
    }
    summary.push_back(row);
  }
  write_json(dir / "sweep.json", summary);
}

void cmd_full(const RunConfig &config, const fs::path &dir) {
  config.validate("full");
  fs::create_directories(dir);
  auto session = open_session(config);
  const AspectPool pool = run_extraction(config, *session, dir);
  const auto result = run_generation(config, *session, pool, dir);
  if (!config.test.empty()) run_eval(config, result.kept, dir);
}

// ---------------------------------------------------------------------------
// Entry point

namespace {

fs::path data_dir() {
  if (const char *env = std::getenv("ABSAGEN_DATA_DIR"); env && *env) return env;
  return ABSAGEN_DATA_DIR;
}

}  // namespace

int run_cli(int argc, char **argv) {
  CLI::App app{"Aspect-based sentiment data generation pipeline"};
  app.set_config("--config", "", "TOML/INI file of flag values; flags override it");
  app.require_subcommand(1);

  RunConfig config;
  std::string strategy = "random", provider = "replay";
  std::string gold_format = "jsonl", test_format = "jsonl";
  std::optional<int> k;
  std::optional<std::uint64_t> seed;
  bool no_extend = false;
  std::string log_level = "warn";
  const fs::path data = data_dir();
  config.demo_bank = data / "demos" / "demo_bank.jsonl";
  config.pos_lexicon = data / "lexicon" / "pos.tsv";
  config.sentiment_lexicon = data / "lexicon" / "sentiment.tsv";

  auto &g = config.generation;
  app.add_option("--corpus", config.corpus, "Unlabeled corpus, one sentence per line");
  app.add_option("--domain", config.domain, "Domain name, e.g. laptop or restaurant");
  app.add_option("--strategy", strategy, "Demonstrations: zero, related or random")
      ->check(CLI::IsMember({"zero", "related", "random"}));
  app.add_option("--k", k, "Demonstrations per extraction prompt (default 4)");
  app.add_option("--threshold", config.threshold, "Minimum overall score (0..10)");
  app.add_flag("--strict-threshold", config.strict_threshold,
               "Keep only scores strictly above the threshold");
  app.add_option("--ratio", config.ratio, "Generated-to-original size ratio");
  app.add_option("--provider", provider, "live, replay or record")
      ->check(CLI::IsMember({"live", "replay", "record"}));
  app.add_option("--fixture", config.fixture, "Replay/record fixture (JSONL)");
  app.add_option("--seed", seed, "Run seed (mandatory for replay)");
  app.add_option("--out", config.out, "Output root");
  app.add_option("--gold", config.gold, "Gold training set");
  app.add_option("--gold-format", gold_format, "jsonl or semeval-xml");
  app.add_option("--test", config.test, "Gold test set");
  app.add_option("--test-format", test_format, "jsonl or semeval-xml");
  app.add_option("--generated", config.generated, "Generated training set (JSONL)");
  app.add_option("--pool", config.pool, "Precomputed aspect pool (JSON)");
  app.add_option("--demo-bank", config.demo_bank, "Extraction demonstrations");
  app.add_option("--prompts", config.prompts_dir, "Directory of prompt overrides");
  app.add_option("--pos-lexicon", config.pos_lexicon, "word<TAB>tag lexicon");
  app.add_option("--sentiment-lexicon", config.sentiment_lexicon,
                 "word<TAB>score lexicon");
  app.add_option("--live-config", config.live_config, "Live endpoint settings (JSON)");
  app.add_flag("--no-extend", no_extend, "Skip aspect extension");
  app.add_option("--theta", config.theta, "Sentiment partition margin");
  app.add_option("--max-in-flight", config.max_in_flight, "Concurrent LLM requests");
  app.add_option("--rounds", g.rounds, "Generation round budget");
  app.add_option("--batch-per-round", g.batch_per_round, "Per-polarity pair cap per round");
  app.add_option("--feedback-k", g.feedback_k, "Feedback demonstrations per request");
  app.add_option("--feedback-capacity", g.feedback_capacity, "Feedback pool size");
  app.add_option("--strategy-mix", g.strategy_mix, "Share of multi-aspect requests");
  app.add_option("--aspects-per-multi", g.aspects_per_multi, "Aspects per multi request");
  app.add_option("--min-words", g.min_words, "Length hint lower bound");
  app.add_option("--max-words", g.max_words, "Length hint upper bound");
  app.add_option("--keep-rate", g.expected_keep_rate, "Expected keep rate for batching");
  app.add_option("--epochs", config.train.epochs, "Proxy classifier epochs");
  app.add_option("--lr", config.train.learning_rate, "Proxy classifier learning rate");
  app.add_option("--batch-size", config.train.batch_size, "Mini-batch size (0 = full)");
  app.add_option("--window", config.train.window, "Aspect context window");
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off");

  struct Command {
    const char *name;
    const char *help;
    void (*run)(const RunConfig &, const fs::path &);
  };
  const Command commands[] = {
      {"extract", "Extract, filter, extend and partition aspects", cmd_extract},
      {"generate", "Generate and judge labeled samples", cmd_generate},
      {"eval", "Compare Original, Generated and Mixed training", cmd_eval},
      {"sweep-threshold", "Generate and evaluate at thresholds 0,2,4,6,8",
       cmd_sweep_threshold},
      {"sweep-ratio", "Generate at ratios 0.5 to 2.5", cmd_sweep_ratio},
      {"full", "Extraction, generation and evaluation in one run", cmd_full},
  };
  for (const auto &c : commands) app.add_subcommand(c.name, c.help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  spdlog::set_level(spdlog::level::from_str(log_level));
  const Command *chosen = nullptr;
  for (const auto &c : commands) {
    if (app.got_subcommand(c.name)) chosen = &c;
  }

  try {
    config.strategy.mode = parse_demo_mode(strategy);
    config.strategy.k = k ? *k : (config.strategy.mode == DemoMode::kZeroShot ? 0 : 4);
    config.provider = parse_provider_mode(provider);
    config.gold_format = parse_dataset_format(gold_format);
    config.test_format = parse_dataset_format(test_format);
    config.seed = seed;
    config.extend = !no_extend;
    config.validate(chosen->name);
  } catch (const ConfigError &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }

  json rc = config.to_json();
  rc["command"] = chosen->name;
  const fs::path dir = config.out / short_digest(rc.dump());
  try {
    fs::create_directories(dir);
    write_json(dir / "run_config.json", rc);
    chosen->run(config, dir);
  } catch (const ConfigError &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitPipeline;
  }
  std::printf("%s\n", dir.string().c_str());
  return kExitOk;
}

}  // namespace absagen
