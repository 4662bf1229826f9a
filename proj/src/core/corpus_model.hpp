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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "core/json_io.hpp"
#include "core/tokenizer.hpp"

namespace vtb {

inline constexpr const char* kDefaultEovToken = "<|end_of_video|>";

// Subject -> Course -> Sub-course -> Knowledge Point.
struct KnowledgePoint {
  std::string subject;
  std::string course;
  std::string sub_course;
  std::string point;

  std::string id() const { return subject + "/" + course + "/" + sub_course + "/" + point; }
  bool operator==(const KnowledgePoint&) const = default;
};

struct VideoMeta {
  std::string video_id;
  std::string title;
  std::string description;
  std::vector<std::string> comments;
  double duration_s = 0.0;
  std::string language = "unknown";
  std::string source_point;  // KnowledgePoint id
  std::string media_ref;     // where the media toolkit can read the video
  bool operator==(const VideoMeta&) const = default;
};

struct AsrSegment {
  double start_s = 0.0;
  double end_s = 0.0;
  std::string text;
  bool silent = false;
  bool operator==(const AsrSegment&) const = default;
};

struct RefinedTranscript {
  std::string video_id;
  std::string language = "unknown";
  std::vector<AsrSegment> raw_segments;
  std::vector<AsrSegment> refined_paragraphs;
  std::optional<double> ppl_raw;
  std::optional<double> ppl_refined;
  // Indices of paragraphs whose refinement failed and kept raw text.
  std::vector<std::size_t> refine_failures;
  bool operator==(const RefinedTranscript&) const = default;
};

enum class ClipStatus { kept, dropped_visual, pending };

struct VideoClip {
  std::string clip_id;
  std::string video_id;
  double start_s = 0.0;
  double end_s = 0.0;
  std::string asr_text;
  std::optional<std::string> caption;
  std::optional<double> caption_asr_similarity;
  ClipStatus status = ClipStatus::pending;
  bool operator==(const VideoClip&) const = default;
};

struct Keyframe {
  std::string frame_id;
  std::string clip_id;
  double timestamp_s = 0.0;
  std::string image_ref;
  std::optional<int> score;
  std::optional<std::string> ocr_text;
  bool ocr_kept = false;
  bool ocr_failed = false;
  bool operator==(const Keyframe&) const = default;
};

enum class ElementKind { image, asr_text, ocr_text, end_of_video };

struct InterleavedElement {
  ElementKind kind = ElementKind::asr_text;
  std::string text;       // asr_text, ocr_text, end_of_video
  std::string image_ref;  // image
  std::optional<double> timestamp_s;

  static InterleavedElement image(std::string ref, double t) {
    return {ElementKind::image, {}, std::move(ref), t};
  }
  static InterleavedElement asr(std::string s) { return {ElementKind::asr_text, std::move(s), {}, {}}; }
  static InterleavedElement ocr(std::string s) { return {ElementKind::ocr_text, std::move(s), {}, {}}; }
  static InterleavedElement eov(std::string token) {
    return {ElementKind::end_of_video, std::move(token), {}, {}};
  }
  bool is_text() const { return kind != ElementKind::image; }
  bool operator==(const InterleavedElement&) const = default;
};

struct InterleavedSample {
  std::string sample_id;
  std::vector<std::string> source_video_ids;
  std::vector<InterleavedElement> elements;
  std::size_t n_images = 0;
  std::size_t n_text_tokens = 0;
  bool oversized = false;  // single fragment larger than the packing budget
  bool operator==(const InterleavedSample&) const = default;
};

const char* to_string(ClipStatus s);
ClipStatus clip_status_from_string(const std::string& s);
const char* to_string(ElementKind k);
ElementKind element_kind_from_string(const std::string& s);

// JSON mappings (nlohmann ADL hooks).
void to_json(json& j, const KnowledgePoint& v);
void from_json(const json& j, KnowledgePoint& v);
void to_json(json& j, const VideoMeta& v);
void from_json(const json& j, VideoMeta& v);
void to_json(json& j, const AsrSegment& v);
void from_json(const json& j, AsrSegment& v);
void to_json(json& j, const RefinedTranscript& v);
void from_json(const json& j, RefinedTranscript& v);
void to_json(json& j, const VideoClip& v);
void from_json(const json& j, VideoClip& v);
void to_json(json& j, const Keyframe& v);
void from_json(const json& j, Keyframe& v);
void to_json(json& j, const InterleavedElement& v);
void from_json(const json& j, InterleavedElement& v);

// Rules a sample is checked against. Budgets are optional: only packed
// corpora (split/concat strategies) carry them.
struct SampleRules {
  std::string eov_token = kDefaultEovToken;
  std::optional<std::size_t> token_budget;
  std::optional<std::size_t> max_images;
  const Tokenizer* tokenizer = nullptr;  // null: default whitespace tokenizer
};

struct Violation {
  std::string sample_id;
  std::size_t line = 0;  // 0 when not read from a file
  std::string invariant;
  std::string detail;
};

// Text-token accounting for a sample; EOV always counts as one token.
std::size_t count_sample_tokens(const std::vector<InterleavedElement>& elements,
                                const Tokenizer& tok);

std::vector<Violation> check_sample(const InterleavedSample& s, const SampleRules& rules);

json sample_to_json(const InterleavedSample& s);
InterleavedSample sample_from_json(const json& j);

// One JSON object, no trailing newline. Throws ValidationError naming the
// first failed invariant.
std::string serialize_sample(const InterleavedSample& s, const SampleRules& rules = {});
InterleavedSample deserialize_sample(std::string_view line);

struct CorpusReport {
  std::size_t n_samples = 0;
  std::vector<Violation> violations;
  std::size_t n_violations() const { return violations.size(); }
};

CorpusReport validate_corpus(const std::filesystem::path& path, const SampleRules& rules = {});

// Reads every record; throws ValidationError with the line number on the first bad one.
std::vector<InterleavedSample> read_corpus(const std::filesystem::path& path);
void write_corpus(const std::filesystem::path& path, const std::vector<InterleavedSample>& samples);

json report_to_json(const CorpusReport& r);

}  // namespace vtb
