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

#include "core/mock_services.hpp"

#include <cmath>
#include <set>

#include "core/error.hpp"
#include "core/hash.hpp"
#include "core/image.hpp"
#include "core/synthetic_video.hpp"
#include "core/text_util.hpp"

namespace vtb {

namespace fs = std::filesystem;

namespace {

json load_optional(const fs::path& dir, const char* name) {
  if (dir.empty()) return nullptr;
  auto p = dir / name;
  if (!fs::exists(p)) return nullptr;
  return read_json_file(p);
}

Transcription transcription_from_json(const json& j) {
  Transcription t;
  t.language = j.value("language", "unknown");
  for (const auto& s : j.value("segments", json::array())) t.segments.push_back(s.get<AsrSegment>());
  return t;
}

// Keyword form used by the relevance heuristic: plural "s" dropped.
std::string stem(std::string w) {
  if (w.size() > 3 && w.back() == 's' && w[w.size() - 2] != 's') w.pop_back();
  return w;
}

int bucket_score(double value, std::initializer_list<double> cutoffs_desc) {
  // cutoffs for 5, 4, 3, 2; below the last is 1.
  int score = 5;
  for (double c : cutoffs_desc) {
    if (value >= c) return score;
    --score;
  }
  return 1;
}

}  // namespace

MockServices::MockServices(const fs::path& dir)
    : ppl_model_(UnigramModel::fit(default_reference_corpus(), 1.0)) {
  if (auto j = load_optional(dir, "transcripts.json"); j.is_object()) {
    for (const auto& [hash, t] : j.items()) transcripts_[hash] = transcription_from_json(t);
  }
  if (auto j = load_optional(dir, "scores.json"); j.is_array()) {
    for (const auto& r : j) {
      ScoreRule rule;
      rule.judge_id = r.value("judge_id", "*");
      rule.kind = r.value("kind", "*");
      rule.match = r.value("match", "");
      rule.scores.relevance = r.value("relevance", 3);
      rule.scores.knowledge_density = r.value("knowledge_density", 3);
      rule.scores.transcription_quality = r.value("transcription_quality", 3);
      if (r.contains("flag") && !r["flag"].is_null()) rule.scores.flag = r["flag"].get<std::string>();
      score_rules_.push_back(std::move(rule));
    }
  }
  if (auto j = load_optional(dir, "captions.json"); j.is_object()) {
    for (const auto& [k, v] : j.items()) captions_[k] = v.get<std::string>();
  }
  if (auto j = load_optional(dir, "ocr.json"); j.is_object()) {
    for (const auto& [k, v] : j.items()) ocr_raw_[k] = v.dump();
  }
  if (auto j = load_optional(dir, "faults.json"); j.is_object()) {
    for (const auto& f : j.value("transport", json::array())) faults_.insert(f.get<std::string>());
  }
  if (!dir.empty() && fs::exists(dir / "ppl_reference.txt")) {
    ppl_model_ = UnigramModel::fit(read_text_file(dir / "ppl_reference.txt"), 1.0);
  }
}

void MockServices::maybe_fail(const std::string& endpoint) const {
  if (faults_.count(endpoint)) throw TransportError("injected transport fault at " + endpoint);
}

Transcription MockServices::transcribe(const fs::path& audio) {
  maybe_fail("/transcribe");
  if (!fs::exists(audio)) throw IoError("audio not found: " + audio.string());
  if (wav_duration(audio) <= 0.0) return {};
  auto hash = sha256_file(audio);
  auto it = transcripts_.find(hash);
  if (it == transcripts_.end())
    throw ProtocolError("no scripted transcript for audio " + hash);
  check_transcription(it->second);
  return it->second;
}

std::string MockServices::refine_text(std::string_view text) {
  maybe_fail("/refine");
  if (text::split_whitespace(text).empty()) throw ArgumentError("refine_text: empty input");
  return refine_text_normalize(text);
}

CriteriaScores MockServices::heuristic_scores(std::string_view text, const KnowledgePoint& point) {
  CriteriaScores s;
  auto ws = text::words(text);
  if (ws.empty()) return s;

  std::size_t fillers = 0;
  for (const auto& w : ws) fillers += text::is_filler(w) ? 1 : 0;
  const double filler_ratio = static_cast<double>(fillers) / static_cast<double>(ws.size());
  if (filler_ratio > 0.5) {
    s.knowledge_density = 1;
  } else if (filler_ratio > 0.3) {
    s.knowledge_density = 2;
  } else if (filler_ratio > 0.15) {
    s.knowledge_density = 3;
  } else if (filler_ratio > 0.05) {
    s.knowledge_density = 4;
  } else {
    s.knowledge_density = 5;
  }

  if (ws.size() < 2) {
    s.transcription_quality = 3;
  } else {
    std::set<std::pair<std::string, std::string>> bigrams;
    for (std::size_t i = 1; i < ws.size(); ++i) bigrams.emplace(ws[i - 1], ws[i]);
    const double distinct = static_cast<double>(bigrams.size()) / static_cast<double>(ws.size() - 1);
    s.transcription_quality = bucket_score(distinct, {0.8, 0.6, 0.4, 0.2});
  }

  std::set<std::string> keywords;
  for (const auto& w : text::words(point.sub_course + " " + point.point))
    if (w.size() >= 3 && !text::is_stopword(w)) keywords.insert(stem(w));
  if (keywords.empty()) {
    s.relevance = 3;
  } else {
    std::set<std::string> present;
    for (const auto& w : ws) present.insert(stem(w));
    std::size_t hit = 0;
    for (const auto& k : keywords) hit += present.count(k);
    const double f = static_cast<double>(hit) / static_cast<double>(keywords.size());
    s.relevance = 1 + static_cast<int>(std::lround(4.0 * f));
  }
  return s;
}

CriteriaScores MockServices::score(std::string_view text, const KnowledgePoint& point,
                                   const std::string& judge_id, ScoreKind kind) {
  maybe_fail("/score");
  maybe_fail("/score:" + judge_id);
  if (text::split_whitespace(text).empty()) throw ArgumentError("score: empty text");
  for (const auto& r : score_rules_) {
    if (r.judge_id != "*" && r.judge_id != judge_id) continue;
    if (r.kind != "*" && r.kind != to_string(kind)) continue;
    if (text.find(r.match) == std::string_view::npos) continue;
    auto s = r.scores;
    s.judge_id = judge_id;
    check_scores(s);
    return s;
  }
  auto s = heuristic_scores(text, point);
  s.judge_id = judge_id;
  return s;
}

std::string MockServices::image_key_lookup(const fs::path& image,
                                           const std::map<std::string, std::string>& table) const {
  auto img = load_gray(image);
  if (auto code = read_fixture_code(img)) {
    if (auto it = table.find("code:" + std::to_string(*code)); it != table.end()) return it->second;
  }
  if (auto it = table.find(pixel_hash(img)); it != table.end()) return it->second;
  return {};
}

std::string MockServices::caption_clip(const std::vector<fs::path>& frames) {
  maybe_fail("/caption");
  if (frames.empty()) throw ArgumentError("caption_clip: no frames");
  std::vector<std::string> parts;
  Sha256 digest;
  for (const auto& f : frames) {
    auto img = load_gray(f);
    digest.update(pixel_hash(img));
    auto cap = image_key_lookup(f, captions_);
    if (!cap.empty() && (parts.empty() || parts.back() != cap)) parts.push_back(cap);
  }
  if (parts.empty()) return "an unrecognized scene " + digest.hex().substr(0, 12);
  return text::join(parts, " ");
}

std::size_t MockServices::text_bucket(std::string_view w) { return fnv1a64(w) % kTextDim; }

EmbeddingVector MockServices::embed_text(std::string_view text) {
  std::vector<double> v(kTextDim, 0.0);
  bool any = false;
  for (const auto& w : text::words(text)) {
    if (text::is_stopword(w)) continue;
    v[text_bucket(w)] += 1.0;
    any = true;
  }
  if (!any) v[text_bucket("<no-content>")] = 1.0;
  return normalized(std::move(v));
}

std::vector<EmbeddingVector> MockServices::embed_texts(const std::vector<std::string>& texts) {
  maybe_fail("/embed");
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    if (text::split_whitespace(t).empty()) throw ArgumentError("embed_texts: empty text");
    out.push_back(embed_text(t));
  }
  return out;
}

EmbeddingVector MockServices::embed_image(const GrayImage& img) {
  // Coarse thumbnail projection. Layout dominates, so small additions barely move it.
  auto small = resize_area(img, kImageGrid, kImageGrid);
  std::vector<double> v;
  v.reserve(small.pixels.size() + 1);
  for (auto px : small.pixels) v.push_back(px / 255.0);
  v.push_back(0.01);
  return normalized(std::move(v));
}

std::vector<EmbeddingVector> MockServices::embed_images(const std::vector<fs::path>& images) {
  maybe_fail("/embed");
  std::vector<EmbeddingVector> out;
  out.reserve(images.size());
  for (const auto& p : images) out.push_back(embed_image(load_gray(p)));
  return out;
}

OcrResult MockServices::ocr_frame(const fs::path& image, const std::string& backend) {
  maybe_fail("/ocr");
  maybe_fail("/ocr:" + backend);
  auto raw = image_key_lookup(image, ocr_raw_);
  if (raw.empty()) return OcrResult{"", 1};
  auto j = json::parse(raw);
  OcrResult r{j.value("text", ""), j.value("informativeness", 1)};
  check_ocr(r);
  return r;
}

double MockServices::perplexity(std::string_view text) {
  maybe_fail("/ppl");
  if (text::words(text).empty()) throw ArgumentError("perplexity: empty text");
  return ppl_model_.perplexity(text);
}

}  // namespace vtb
