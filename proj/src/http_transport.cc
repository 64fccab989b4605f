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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "absagen/error.h"
#include "absagen/llm_gateway.h"

namespace absagen {

namespace {

class HttplibTransport : public HttpTransport {
 public:
  HttplibTransport(std::string base_url, int timeout_seconds)
      : base_url_(std::move(base_url)), timeout_(timeout_seconds) {
    if (!httplib::Client(base_url_).is_valid()) {
      throw ConfigError("invalid base URL " + base_url_);
    }
  }

  // A client per request: requests arrive from several gateway workers.
  HttpResponse post(const std::string &path, const std::string &body,
                    const std::multimap<std::string, std::string> &headers)
      override {
    httplib::Client client(base_url_);
    client.set_connection_timeout(timeout_, 0);
    client.set_read_timeout(timeout_, 0);
    client.set_write_timeout(timeout_, 0);
    httplib::Headers h(headers.begin(), headers.end());
    auto res = client.Post(path, h, body, "application/json");
    if (!res) return HttpResponse{-1, httplib::to_string(res.error())};
    return HttpResponse{res->status, res->body};
  }

 private:
  std::string base_url_;
  int timeout_;
};

}  // namespace

std::unique_ptr<HttpTransport> make_http_transport(const std::string &base_url,
                                                   int timeout_seconds) {
  return std::make_unique<HttplibTransport>(base_url, timeout_seconds);
}

}  // namespace absagen
