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

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace vtb::text {

// Whitespace-delimited tokens, unmodified.
std::vector<std::string_view> split_whitespace(std::string_view s);

// Lowercased alphanumeric words; punctuation acts as a separator.
std::vector<std::string> words(std::string_view s);

std::string collapse_whitespace(std::string_view s);
std::string to_lower(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Spoken hesitation tokens ("um", "uh", ...), compared on lowercased words.
bool is_filler(std::string_view lowered_word);
bool is_stopword(std::string_view lowered_word);

// Token set used for OCR near-duplicate detection: lowercased whitespace tokens.
std::set<std::string> token_set(std::string_view s);
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

}  // namespace vtb::text
