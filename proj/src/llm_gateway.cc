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

#include "absagen/llm_gateway.h"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "absagen/corpus_io.h"
#include "absagen/text.h"
#include "json.hpp"

namespace absagen {

using nlohmann::json;

namespace {

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) !=
      1) {
    throw Error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xF]);
  }
  return out;
}

}  // namespace

std::string request_digest(const CompletionRequest &request) {
  // Temperature is printed with fixed precision so 0.7 hashes identically
  // regardless of how it was computed.
  char temp[32];
  std::snprintf(temp, sizeof(temp), "%.4f", request.temperature);
  const json key = {request.template_name, request.prompt, std::string(temp),
                    request.max_tokens};
  return sha256_hex(key.dump());
}

// ---------------------------------------------------------------------------
// Fixtures

void Fixture::add(std::string digest, std::string response) {
  if (index_.count(digest)) {
    throw FixtureError("duplicate fixture digest " + digest, digest);
  }
  index_.emplace(digest, entries_.size());
  entries_.push_back(Entry{std::move(digest), std::move(response)});
}

const std::string *Fixture::find(const std::string &digest) const {
  auto it = index_.find(digest);
  return it == index_.end() ? nullptr : &entries_[it->second].response;
}

Fixture Fixture::load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read fixture " + path.string());
  Fixture fixture;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    try {
      const json j = json::parse(line);
      std::string digest;
      if (j.contains("digest")) {
        digest = j["digest"].get<std::string>();
      } else {
        CompletionRequest r;
        r.template_name = j.at("template").get<std::string>();
        r.prompt = j.at("prompt").get<std::string>();
        r.temperature = j.at("temperature").get<double>();
        r.max_tokens = j.at("max_tokens").get<int>();
        digest = request_digest(r);
      }
      fixture.add(std::move(digest), j.at("response").get<std::string>());
    } catch (const json::exception &e) {
      throw FixtureError(where + ": " + e.what());
    } catch (const FixtureError &e) {
      throw FixtureError(where + ": " + e.what(), e.digest());
    }
  }
  return fixture;
}

ReplayProvider::ReplayProvider(std::shared_ptr<const Fixture> fixture)
    : fixture_(std::move(fixture)) {}

std::string ReplayProvider::complete(const CompletionRequest &request) {
  const std::string digest = request_digest(request);
  if (const std::string *r = fixture_->find(digest)) return *r;
  throw FixtureError("no recorded response for digest " + digest +
                         " (template " + request.template_name + ")",
                     digest);
}

RecordingProvider::RecordingProvider(std::shared_ptr<CompletionProvider> inner,
                                     std::filesystem::path path)
    : inner_(std::move(inner)), path_(std::move(path)) {
  if (std::filesystem::exists(path_)) recorded_ = Fixture::load(path_);
}

std::string RecordingProvider::complete(const CompletionRequest &request) {
  const std::string digest = request_digest(request);
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (const std::string *r = recorded_.find(digest)) return *r;
  }
  std::string response = inner_->complete(request);
  std::lock_guard<std::mutex> lock(mu_);
  // Another thread may have recorded the same request meanwhile.
  if (const std::string *r = recorded_.find(digest)) return *r;
  const json record = {{"digest", digest},
                       {"template", request.template_name},
                       {"prompt", request.prompt},
                       {"temperature", request.temperature},
                       {"max_tokens", request.max_tokens},
                       {"response", response}};
  std::ofstream out(path_, std::ios::app);
  if (!out) throw IoError("cannot append to fixture " + path_.string());
  out << record.dump() << '\n';
  recorded_.add(digest, response);
  return response;
}

// ---------------------------------------------------------------------------
// Live provider

LiveConfig load_live_config(const std::filesystem::path &path) {
  LiveConfig c;
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception &e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  c.base_url = j.value("base_url", c.base_url);
  c.path = j.value("path", c.path);
  c.model = j.value("model", c.model);
  c.api_key_env = j.value("api_key_env", c.api_key_env);
  c.max_retries = j.value("max_retries", c.max_retries);
  c.initial_backoff = std::chrono::milliseconds(
      j.value("initial_backoff_ms", c.initial_backoff.count()));
  c.max_backoff =
      std::chrono::milliseconds(j.value("max_backoff_ms", c.max_backoff.count()));
  c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
  return c;
}

LiveProvider::LiveProvider(LiveConfig config,
                           std::unique_ptr<HttpTransport> transport,
                           Sleeper sleeper)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      sleeper_(std::move(sleeper)) {
  if (!sleeper_) {
    sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
  if (const char *key = std::getenv(config_.api_key_env.c_str())) api_key_ = key;
}

std::string LiveProvider::complete(const CompletionRequest &request) {
  if (request.prompt.empty()) throw ValidationError("empty prompt");
  json body = {{"model", config_.model},
               {"messages", json::array({{{"role", "user"},
                                          {"content", request.prompt}}})},
               {"temperature", request.temperature},
               {"max_tokens", request.max_tokens}};
  if (request.seed) body["seed"] = *request.seed;
  std::multimap<std::string, std::string> headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
  const std::string payload = body.dump();

  std::chrono::milliseconds backoff = config_.initial_backoff;
  for (int attempt = 0;; ++attempt) {
    const HttpResponse resp = transport_->post(config_.path, payload, headers);
    if (resp.status == 200) {
      try {
        const json j = json::parse(resp.body);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
      } catch (const json::exception &e) {
        throw TransportError(std::string("malformed completion response: ") +
                             e.what());
      }
    }
    const bool transient =
        resp.status == -1 || resp.status == 429 || resp.status >= 500;
    if (!transient) {
      throw TransportError("completion request failed with HTTP " +
                           std::to_string(resp.status) + ": " + resp.body);
    }
    if (attempt >= config_.max_retries) {
      throw TransportError("completion request failed after " +
                           std::to_string(attempt + 1) + " attempts (last status " +
                           std::to_string(resp.status) + ")");
    }
    spdlog::warn("transient HTTP {} from provider, retrying in {} ms",
                 resp.status, backoff.count());
    sleeper_(backoff);
    backoff = std::min(backoff * 2, config_.max_backoff);
  }
}

// ---------------------------------------------------------------------------
// Output parsing

namespace {

std::string strip_quotes(std::string s) {
  s = trim(s);
  while (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                           (s.front() == '\'' && s.back() == '\''))) {
    s = trim(s.substr(1, s.size() - 2));
  }
  return s;
}

// Quoted strings inside [...], tolerating single quotes.
std::optional<std::vector<std::string>> scan_bracketed(std::string_view text) {
  const std::size_t open = text.find('[');
  const std::size_t close = text.rfind(']');
  if (open == std::string_view::npos || close == std::string_view::npos ||
      close < open) {
    return std::nullopt;
  }
  const std::string_view inner = text.substr(open + 1, close - open - 1);
  try {
    const json j = json::parse(text.substr(open, close - open + 1));
    if (j.is_array()) {
      std::vector<std::string> out;
      for (const auto &item : j) {
        if (!item.is_string()) return std::nullopt;
        out.push_back(item.get<std::string>());
      }
      return out;
    }
  } catch (const json::exception &) {
  }
  std::vector<std::string> out;
  std::size_t i = 0;
  bool any_quote = false;
  while (i < inner.size()) {
    const char q = inner[i];
    if (q != '"' && q != '\'') {
      ++i;
      continue;
    }
    any_quote = true;
    const std::size_t end = inner.find(q, i + 1);
    if (end == std::string_view::npos) return std::nullopt;
    out.emplace_back(inner.substr(i + 1, end - i - 1));
    i = end + 1;
  }
  if (!any_quote) {
    // Unquoted [a, b] lists.
    std::size_t start = 0;
    while (start <= inner.size()) {
      std::size_t comma = inner.find(',', start);
      if (comma == std::string_view::npos) comma = inner.size();
      out.emplace_back(inner.substr(start, comma - start));
      start = comma + 1;
    }
  }
  return out;
}

// "- item", "* item", "12. item"; nullopt when the line has no marker.
std::optional<std::string> strip_item_marker(const std::string &line) {
  if (line.empty()) return std::nullopt;
  if (line[0] == '-' || line[0] == '*') return line.substr(1);
  std::size_t i = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
  if (i > 0 && i < line.size() && line[i] == '.') return line.substr(i + 1);
  return std::nullopt;
}

}  // namespace

std::vector<std::string> parse_list(std::string_view text) {
  std::vector<std::string> items;
  if (auto bracketed = scan_bracketed(text)) {
    for (auto &item : *bracketed) {
      std::string t = strip_quotes(item);
      if (!t.empty()) items.push_back(std::move(t));
    }
    return items;
  }
  std::size_t start = 0;
  bool any_marker = false;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string line = trim(text.substr(start, end - start));
    if (auto item = strip_item_marker(line)) {
      any_marker = true;
      std::string t = strip_quotes(*item);
      if (!t.empty()) items.push_back(std::move(t));
    }
    start = end + 1;
  }
  if (!any_marker || items.empty()) {
    throw FormatError("no list items in LLM output", std::string(text));
  }
  return items;
}

// ---------------------------------------------------------------------------
// Gateway

Gateway::Gateway(std::shared_ptr<CompletionProvider> provider, int max_in_flight)
    : provider_(std::move(provider)),
      max_in_flight_(std::max(1, max_in_flight)),
      slots_(std::max(1, max_in_flight)) {
  if (!provider_) throw ConfigError("gateway needs a provider");
  if (max_in_flight <= 0) throw ConfigError("max_in_flight must be positive");
}

std::string Gateway::complete(const CompletionRequest &request) {
  if (request.prompt.empty()) throw ValidationError("empty prompt");
  if (request.temperature < 0) throw ValidationError("negative temperature");
  if (request.max_tokens <= 0) throw ValidationError("max_tokens must be positive");
  slots_.acquire();
  try {
    std::string out = provider_->complete(request);
    slots_.release();
    return out;
  } catch (...) {
    slots_.release();
    throw;
  }
}

void Gateway::run_workers(std::size_t n,
                          const std::function<void(std::size_t)> &body) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(max_in_flight_));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  }
}

}  // namespace absagen
