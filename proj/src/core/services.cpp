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

#include "core/services.hpp"

#include <cctype>
#include <cmath>

#include "core/error.hpp"
#include "core/text_util.hpp"

namespace vtb {

const char* to_string(ScoreKind k) {
  return k == ScoreKind::metadata ? "metadata" : "transcript";
}

void check_transcription(const Transcription& t) {
  double prev_end = 0.0;
  for (std::size_t i = 0; i < t.segments.size(); ++i) {
    const auto& s = t.segments[i];
    if (!(s.start_s >= 0.0 && s.start_s < s.end_s))
      throw ProtocolError("segment " + std::to_string(i) + " has an invalid time span");
    if (i > 0 && s.start_s < prev_end - 1e-9)
      throw ProtocolError("segment " + std::to_string(i) + " overlaps or precedes segment " +
                          std::to_string(i - 1));
    if (s.text.empty() && !s.silent)
      throw ProtocolError("segment " + std::to_string(i) + " has empty text but is not silent");
    prev_end = s.end_s;
  }
  if (t.language.empty()) throw ProtocolError("transcription without a language tag");
}

void check_scores(const CriteriaScores& s) {
  auto in_range = [](int v) { return v >= 1 && v <= 5; };
  if (!in_range(s.relevance) || !in_range(s.knowledge_density) ||
      !in_range(s.transcription_quality))
    throw ProtocolError("criteria scores must be integers in 1..5");
}

void check_ocr(const OcrResult& r) {
  if (r.informativeness < 1 || r.informativeness > 5)
    throw ProtocolError("OCR informativeness must be in 1..5");
}

void check_unit(const EmbeddingVector& v) {
  double n2 = 0.0;
  for (double x : v.values) n2 += x * x;
  if (v.values.empty() || std::abs(std::sqrt(n2) - 1.0) > 1e-6)
    throw ProtocolError("embedding is not unit-norm");
}

EmbeddingVector normalized(std::vector<double> values) {
  double n2 = 0.0;
  for (double x : values) n2 += x * x;
  if (!(n2 > 0.0)) throw ProtocolError("cannot normalize a zero embedding");
  const double inv = 1.0 / std::sqrt(n2);
  for (double& x : values) x *= inv;
  return {std::move(values)};
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim()) throw ArgumentError("embedding dimensions differ");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (!(na > 0.0) || !(nb > 0.0)) throw ArgumentError("cosine of a zero vector");
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

UnigramModel::UnigramModel(std::map<std::string, std::size_t> counts, double alpha)
    : counts_(std::move(counts)), alpha_(alpha) {
  if (alpha_ < 0) throw ArgumentError("smoothing must be non-negative");
  for (const auto& [w, c] : counts_) total_ += c;
  if (total_ == 0 && alpha_ == 0) throw ArgumentError("empty unsmoothed unigram model");
}

UnigramModel UnigramModel::fit(std::string_view reference_text, double alpha) {
  std::map<std::string, std::size_t> counts;
  for (auto& w : text::words(reference_text)) ++counts[w];
  return UnigramModel(std::move(counts), alpha);
}

double UnigramModel::probability(const std::string& word) const {
  auto it = counts_.find(word);
  const double c = it == counts_.end() ? 0.0 : static_cast<double>(it->second);
  const double denom = static_cast<double>(total_) + alpha_ * static_cast<double>(counts_.size() + 1);
  return (c + alpha_) / denom;
}

double UnigramModel::perplexity(std::string_view text) const {
  auto ws = text::words(text);
  if (ws.empty()) throw ArgumentError("perplexity of text without words");
  double surprisal = 0.0;
  for (const auto& w : ws) {
    const double p = probability(w);
    if (!(p > 0.0)) throw ArgumentError("word '" + w + "' is outside the unsmoothed vocabulary");
    surprisal -= std::log(p);
  }
  return std::exp(surprisal / static_cast<double>(ws.size()));
}

std::string_view default_reference_corpus() {
  return R"(In this lesson we study the basic properties of triangles and angles.
The sum of the interior angles of a triangle is one hundred and eighty degrees.
A right triangle has one angle of ninety degrees, and the side opposite the right
angle is called the hypotenuse. The Pythagorean theorem states that the square of
the hypotenuse is equal to the sum of the squares of the other two sides.
We can use this theorem to find the length of a missing side. For example, if the
two legs are three and four, the hypotenuse is five.
A rational number can be written as the ratio of two integers, while an irrational
number cannot be written as such a ratio. The square root of two is irrational.
In physics, velocity is the rate of change of position with respect to time, and
acceleration is the rate of change of velocity. When an object moves with constant
acceleration, its velocity increases by the same amount in each second.
The water cycle describes how water evaporates from the ocean, forms clouds,
and returns to the surface as rain or snow.
An atom is the smallest unit of an element, and a molecule is a group of atoms
bonded together. A compound contains atoms of two or more different elements.
In computer science, depth first search explores a graph by following each path as
far as possible before it backtracks to the previous node.
Let us now look at the next example and compute the area of the triangle. The area
is one half of the base times the height. If the base is six and the height is
four, the area is twelve square units. Notice that the height must be perpendicular
to the base. We will use these ideas again in the next lesson.)";
}

namespace {

std::string strip_key(std::string_view tok) {
  std::size_t b = 0, e = tok.size();
  while (b < e && !std::isalnum(static_cast<unsigned char>(tok[b]))) ++b;
  while (e > b && !std::isalnum(static_cast<unsigned char>(tok[e - 1]))) --e;
  return text::to_lower(tok.substr(b, e - b));
}

}  // namespace

std::string refine_text_normalize(std::string_view input) {
  std::vector<std::string> kept;
  std::string prev_key;
  for (auto tok : text::split_whitespace(input)) {
    auto key = strip_key(tok);
    if (!key.empty() && text::is_filler(key)) continue;
    if (!key.empty() && key == prev_key) continue;
    kept.emplace_back(tok);
    if (!key.empty()) prev_key = key;
  }
  if (kept.empty()) return text::collapse_whitespace(input);
  return text::join(kept, " ");
}

}  // namespace vtb
