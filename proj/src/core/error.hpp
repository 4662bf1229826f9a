// Copyright 2026 The vtb Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace vtb {

enum class ErrorKind {
  argument,
  validation,
  io,
  config,
  transport,  // retryable
  protocol,
  stage,
  internal,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

struct ArgumentError : Error {
  explicit ArgumentError(const std::string& m) : Error(ErrorKind::argument, m) {}
};

struct ValidationError : Error {
  explicit ValidationError(const std::string& m) : Error(ErrorKind::validation, m) {}
};

struct IoError : Error {
  explicit IoError(const std::string& m) : Error(ErrorKind::io, m) {}
};

struct TransportError : Error {
  explicit TransportError(const std::string& m) : Error(ErrorKind::transport, m) {}
};

struct ProtocolError : Error {
  explicit ProtocolError(const std::string& m) : Error(ErrorKind::protocol, m) {}
};

struct StageError : Error {
  explicit StageError(const std::string& m) : Error(ErrorKind::stage, m) {}
};

// Names the offending key so the CLI can report it.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& message)
      : Error(ErrorKind::config, message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::argument: return "argument";
    case ErrorKind::validation: return "validation";
    case ErrorKind::io: return "io";
    case ErrorKind::config: return "config";
    case ErrorKind::transport: return "transport";
    case ErrorKind::protocol: return "protocol";
    case ErrorKind::stage: return "stage";
    case ErrorKind::internal: return "internal";
  }
  return "internal";
}

}  // namespace vtb
