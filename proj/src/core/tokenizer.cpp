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

#include "core/tokenizer.hpp"

#include "core/text_util.hpp"

namespace vtb {

std::size_t WhitespaceTokenizer::count(std::string_view text) const {
  return text::split_whitespace(text).size();
}

const Tokenizer& default_tokenizer() {
  static const WhitespaceTokenizer tok;
  return tok;
}

}  // namespace vtb
