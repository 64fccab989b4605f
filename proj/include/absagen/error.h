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

#ifndef ABSAGEN_ERROR_H_
#define ABSAGEN_ERROR_H_

#include <stdexcept>
#include <string>

namespace absagen {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Invalid UTF-8 in an input file. Carries the 1-based line number.
class DecodeError : public Error {
 public:
  DecodeError(const std::string &path, int line)
      : Error(path + ":" + std::to_string(line) + ": invalid UTF-8"),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// Missing slot while rendering a prompt template.
class TemplateError : public Error {
 public:
  TemplateError(const std::string &message, std::string slot)
      : Error(message), slot_(std::move(slot)) {}
  const std::string &slot() const { return slot_; }

 private:
  std::string slot_;
};

// Replay miss or malformed fixture file.
class FixtureError : public Error {
 public:
  FixtureError(const std::string &message, std::string digest = "")
      : Error(message), digest_(std::move(digest)) {}
  const std::string &digest() const { return digest_; }

 private:
  std::string digest_;
};

class TransportError : public Error {
 public:
  using Error::Error;
};

// LLM output did not contain the expected structure. Keeps the raw text.
class FormatError : public Error {
 public:
  FormatError(const std::string &message, std::string raw)
      : Error(message), raw_(std::move(raw)) {}
  const std::string &raw() const { return raw_; }

 private:
  std::string raw_;
};

class ScoringError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class PipelineError : public Error {
 public:
  using Error::Error;
};

}  // namespace absagen

#endif  // ABSAGEN_ERROR_H_
