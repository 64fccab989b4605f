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
#include "support/mock_chat_server.h"

#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "support/simulated_provider.h"

namespace absagen::testing {

struct MockChatServer::Impl {
  httplib::Server server;
  SimulatedProvider simulator;
  std::thread thread;
  int port = 0;
};

MockChatServer::MockChatServer(int fail_first)
    : impl_(std::make_unique<Impl>()), fail_first_(fail_first) {
  impl_->server.Post("/v1/chat/completions", [this](const httplib::Request &req,
                                                    httplib::Response &res) {
    const int n = requests_++;
    if (n < fail_first_) {
      res.status = 429;
      res.set_content("rate limited", "text/plain");
      return;
    }
    const auto body = nlohmann::json::parse(req.body);
    const std::string prompt = body.at("messages").at(0).at("content");
    const std::string text = impl_->simulator.answer(
        SimulatedProvider::template_for_prompt(prompt), prompt);
    nlohmann::json out = {
        {"choices", {{{"index", 0}, {"message", {{"role", "assistant"}, {"content", text}}}}}}};
    res.set_content(out.dump(), "application/json");
  });
  impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

MockChatServer::~MockChatServer() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::string MockChatServer::base_url() const {
  return "http://127.0.0.1:" + std::to_string(impl_->port);
}

}  // namespace absagen::testing
