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

#ifndef ABSAGEN_LLM_GATEWAY_H_
#define ABSAGEN_LLM_GATEWAY_H_

#include <chrono>
#include <cstddef>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "absagen/error.h"

namespace absagen {

inline constexpr double kGenerationTemperature = 0.7;
inline constexpr double kJudgeTemperature = 0.0;

struct CompletionRequest {
  // Name of the template the prompt was rendered from; part of the digest.
  std::string template_name;
  std::string prompt;
  double temperature = kGenerationTemperature;
  int max_tokens = 256;
  // Forwarded to live providers; not part of the digest.
  std::optional<long long> seed;
};

// Hex SHA-256 over (template name, prompt, temperature, max_tokens).
std::string request_digest(const CompletionRequest &request);

class CompletionProvider {
 public:
  virtual ~CompletionProvider() = default;
  virtual std::string complete(const CompletionRequest &request) = 0;
};

// Recorded (digest, response) pairs.
//
// File format: one JSON object per line. Each record needs "response" and
// either "digest" or the request fields "template", "prompt", "temperature"
// and "max_tokens" (the digest is then computed on load, which is how
// fixtures are written by hand). Recorded files carry both.
class Fixture {
 public:
  struct Entry {
    std::string digest;
    std::string response;
  };

  static Fixture load(const std::filesystem::path &path);

  // Throws FixtureError on a duplicate digest.
  void add(std::string digest, std::string response);
  const std::string *find(const std::string &digest) const;
  const std::vector<Entry> &entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<Entry> entries_;
  std::map<std::string, std::size_t> index_;
};

class ReplayProvider : public CompletionProvider {
 public:
  explicit ReplayProvider(std::shared_ptr<const Fixture> fixture);
  // Throws FixtureError carrying the digest on a miss.
  std::string complete(const CompletionRequest &request) override;

 private:
  std::shared_ptr<const Fixture> fixture_;
};

// Forwards to `inner` and appends each new (request, response) to `path`.
// A request whose digest is already recorded is answered from the record.
class RecordingProvider : public CompletionProvider {
 public:
  RecordingProvider(std::shared_ptr<CompletionProvider> inner,
                    std::filesystem::path path);
  std::string complete(const CompletionRequest &request) override;

 private:
  std::shared_ptr<CompletionProvider> inner_;
  std::filesystem::path path_;
  std::mutex mu_;
  Fixture recorded_;
};

struct HttpResponse {
  // -1 when the request never produced a status (connection failure).
  int status = -1;
  std::string body;
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse post(const std::string &path, const std::string &body,
                            const std::multimap<std::string, std::string>
                                &headers) = 0;
};

// cpp-httplib client for an http:// or https:// base URL.
std::unique_ptr<HttpTransport> make_http_transport(const std::string &base_url,
                                                   int timeout_seconds);

struct LiveConfig {
  std::string base_url = "https://api.openai.com";
  std::string path = "/v1/chat/completions";
  std::string model = "gpt-3.5-turbo";
  // Environment variable holding the bearer token.
  std::string api_key_env = "OPENAI_API_KEY";
  int max_retries = 5;
  std::chrono::milliseconds initial_backoff{500};
  std::chrono::milliseconds max_backoff{16000};
  int timeout_seconds = 60;
};

// Reads a JSON object with any of: base_url, path, model, api_key_env,
// max_retries, initial_backoff_ms, max_backoff_ms, timeout_seconds.
LiveConfig load_live_config(const std::filesystem::path &path);

// Chat-completion client. 429, 5xx and connection failures are retried with
// exponential backoff (initial_backoff doubling, capped at max_backoff) up
// to max_retries times; other statuses fail immediately.
class LiveProvider : public CompletionProvider {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  LiveProvider(LiveConfig config, std::unique_ptr<HttpTransport> transport,
               Sleeper sleeper = {});
  std::string complete(const CompletionRequest &request) override;

 private:
  LiveConfig config_;
  std::unique_ptr<HttpTransport> transport_;
  Sleeper sleeper_;
  std::string api_key_;
};

// Accepts a bracketed array of quoted strings, or lines prefixed by "-", "*"
// or "N."; items are trimmed and empties dropped. An explicit empty array is
// a valid empty answer. Throws FormatError carrying the raw text otherwise.
std::vector<std::string> parse_list(std::string_view text);

inline constexpr std::string_view kListReprompt = "\n\nAnswer only with a list.";

// Front door for every LLM call: bounds in-flight requests and implements
// the one-shot re-prompt on unparseable output.
class Gateway {
 public:
  explicit Gateway(std::shared_ptr<CompletionProvider> provider,
                   int max_in_flight = 4);

  std::string complete(const CompletionRequest &request);

  // Sends `request`, parses with `parse` (which throws FormatError on bad
  // output), and on failure re-sends once with `reprompt` appended. The
  // second failure propagates.
  template <typename Parse>
  auto complete_parsed(const CompletionRequest &request, Parse parse,
                       std::string_view reprompt) {
    try {
      return parse(complete(request));
    } catch (const FormatError &) {
    }
    CompletionRequest retry = request;
    retry.prompt += reprompt;
    return parse(complete(retry));
  }

  std::vector<std::string> complete_list(const CompletionRequest &request) {
    return complete_parsed(request, parse_list, kListReprompt);
  }

  // Runs fn(0..n-1) on up to max_in_flight threads and returns the results in
  // index order. The first exception by index is rethrown after all finish.
  template <typename Fn>
  auto parallel_map(std::size_t n, Fn fn)
      -> std::vector<decltype(fn(std::size_t{}))>;

  int max_in_flight() const { return max_in_flight_; }

 private:
  void run_workers(std::size_t n, const std::function<void(std::size_t)> &body);

  std::shared_ptr<CompletionProvider> provider_;
  int max_in_flight_;
  std::counting_semaphore<> slots_;
};

template <typename Fn>
auto Gateway::parallel_map(std::size_t n, Fn fn)
    -> std::vector<decltype(fn(std::size_t{}))> {
  using T = decltype(fn(std::size_t{}));
  std::vector<std::optional<T>> results(n);
  std::vector<std::exception_ptr> errors(n);
  run_workers(n, [&](std::size_t i) {
    try {
      results[i].emplace(fn(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (const auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<T> out;
  out.reserve(n);
  for (auto &r : results) out.push_back(std::move(*r));
  return out;
}

}  // namespace absagen

#endif  // ABSAGEN_LLM_GATEWAY_H_
