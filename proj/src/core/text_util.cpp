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

#include "core/text_util.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace vtb::text {

namespace {

constexpr std::array<std::string_view, 10> kFillers = {
    "um", "uh", "umm", "uhm", "erm", "er", "hmm", "mm", "ah", "eh"};

constexpr std::array<std::string_view, 44> kStopwords = {
    "a",    "an",   "the",  "and",  "or",   "of",   "to",   "in",   "on",
    "at",   "for",  "with", "is",   "are",  "was",  "were", "be",   "it",
    "this", "that", "these", "those", "by", "as",   "from", "we",   "you",
    "i",    "so",   "then", "now",  "here", "there", "its", "our",  "your",
    "has",  "have", "do",   "does", "if",   "can",  "will", "into"};

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::vector<std::string_view> split_whitespace(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    auto uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc) || uc >= 0x80) {
      cur.push_back(static_cast<char>(std::tolower(uc)));
    } else if (c == '\'' && !cur.empty()) {
      cur.push_back(c);
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  for (auto tok : split_whitespace(s)) {
    if (!out.empty()) out.push_back(' ');
    out.append(tok);
  }
  return out;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

bool is_filler(std::string_view w) {
  return std::find(kFillers.begin(), kFillers.end(), w) != kFillers.end();
}

bool is_stopword(std::string_view w) {
  return std::find(kStopwords.begin(), kStopwords.end(), w) != kStopwords.end();
}

std::set<std::string> token_set(std::string_view s) {
  std::set<std::string> out;
  for (auto& w : words(s)) out.insert(std::move(w));
  return out;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& t : a) inter += b.count(t);
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace vtb::text
