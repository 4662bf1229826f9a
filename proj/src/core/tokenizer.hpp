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

#include <cstddef>
#include <functional>
#include <memory>
#include <string_view>

namespace vtb {

class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::size_t count(std::string_view text) const = 0;
};

class WhitespaceTokenizer final : public Tokenizer {
 public:
  std::size_t count(std::string_view text) const override;
};

// Delegates counting to an external tokenizer (a service client or a local
// model binding); the callback's reported length is taken as-is.
class ExternalTokenizer final : public Tokenizer {
 public:
  explicit ExternalTokenizer(std::function<std::size_t(std::string_view)> fn)
      : fn_(std::move(fn)) {}
  std::size_t count(std::string_view text) const override { return fn_(text); }

 private:
  std::function<std::size_t(std::string_view)> fn_;
};

const Tokenizer& default_tokenizer();

inline std::size_t count_tokens(std::string_view text) {
  return default_tokenizer().count(text);
}

}  // namespace vtb
