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

#include "core/corpus_model.hpp"

#include <fstream>
#include <set>

#include "core/error.hpp"

namespace vtb {

namespace {

template <typename T>
std::optional<T> get_optional(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

}  // namespace

const char* to_string(ClipStatus s) {
  switch (s) {
    case ClipStatus::kept: return "kept";
    case ClipStatus::dropped_visual: return "dropped_visual";
    case ClipStatus::pending: return "pending";
  }
  return "pending";
}

ClipStatus clip_status_from_string(const std::string& s) {
  if (s == "kept") return ClipStatus::kept;
  if (s == "dropped_visual") return ClipStatus::dropped_visual;
  if (s == "pending") return ClipStatus::pending;
  throw ValidationError("unknown clip status '" + s + "'");
}

const char* to_string(ElementKind k) {
  switch (k) {
    case ElementKind::image: return "image";
    case ElementKind::asr_text: return "asr_text";
    case ElementKind::ocr_text: return "ocr_text";
    case ElementKind::end_of_video: return "end_of_video";
  }
  return "asr_text";
}

ElementKind element_kind_from_string(const std::string& s) {
  if (s == "image") return ElementKind::image;
  if (s == "asr_text") return ElementKind::asr_text;
  if (s == "ocr_text") return ElementKind::ocr_text;
  if (s == "end_of_video") return ElementKind::end_of_video;
  throw ValidationError("unknown element kind '" + s + "'");
}

void to_json(json& j, const KnowledgePoint& v) {
  j = json{{"subject", v.subject}, {"course", v.course}, {"sub_course", v.sub_course},
           {"point", v.point}, {"id", v.id()}};
}

void from_json(const json& j, KnowledgePoint& v) {
  v.subject = require_string(j, "subject");
  v.course = require_string(j, "course");
  v.sub_course = require_string(j, "sub_course");
  v.point = require_string(j, "point");
}

void to_json(json& j, const VideoMeta& v) {
  j = json{{"video_id", v.video_id},     {"title", v.title},
           {"description", v.description}, {"comments", v.comments},
           {"duration_s", v.duration_s},   {"language", v.language},
           {"source_point", v.source_point}, {"media_ref", v.media_ref}};
}

void from_json(const json& j, VideoMeta& v) {
  v.video_id = require_string(j, "video_id");
  if (v.video_id.empty()) throw ValidationError("video_id must be non-empty");
  v.title = j.value("title", "");
  v.description = j.value("description", "");
  v.comments = j.value("comments", std::vector<std::string>{});
  v.duration_s = j.value("duration_s", 0.0);
  if (v.duration_s < 0) throw ValidationError("duration_s must be >= 0 for " + v.video_id);
  v.language = j.value("language", "unknown");
  v.source_point = j.value("source_point", "");
  v.media_ref = j.value("media_ref", "");
}

void to_json(json& j, const AsrSegment& v) {
  j = json{{"start_s", v.start_s}, {"end_s", v.end_s}, {"text", v.text}};
  if (v.silent) j["silent"] = true;
}

void from_json(const json& j, AsrSegment& v) {
  v.start_s = require_number(j, "start_s");
  v.end_s = require_number(j, "end_s");
  v.text = j.value("text", "");
  v.silent = j.value("silent", false);
}

void to_json(json& j, const RefinedTranscript& v) {
  j = json{{"video_id", v.video_id},
           {"language", v.language},
           {"raw_segments", v.raw_segments},
           {"refined_paragraphs", v.refined_paragraphs}};
  put_optional(j, "ppl_raw", v.ppl_raw);
  put_optional(j, "ppl_refined", v.ppl_refined);
  if (!v.refine_failures.empty()) j["refine_failures"] = v.refine_failures;
}

void from_json(const json& j, RefinedTranscript& v) {
  v.video_id = require_string(j, "video_id");
  v.language = j.value("language", "unknown");
  v.raw_segments = require(j, "raw_segments").get<std::vector<AsrSegment>>();
  v.refined_paragraphs = require(j, "refined_paragraphs").get<std::vector<AsrSegment>>();
  v.ppl_raw = get_optional<double>(j, "ppl_raw");
  v.ppl_refined = get_optional<double>(j, "ppl_refined");
  v.refine_failures = j.value("refine_failures", std::vector<std::size_t>{});
}

void to_json(json& j, const VideoClip& v) {
  j = json{{"clip_id", v.clip_id}, {"video_id", v.video_id}, {"start_s", v.start_s},
           {"end_s", v.end_s},     {"asr_text", v.asr_text}};
  put_optional(j, "caption", v.caption);
  put_optional(j, "caption_asr_similarity", v.caption_asr_similarity);
  j["status"] = to_string(v.status);
}

void from_json(const json& j, VideoClip& v) {
  v.clip_id = require_string(j, "clip_id");
  v.video_id = require_string(j, "video_id");
  v.start_s = require_number(j, "start_s");
  v.end_s = require_number(j, "end_s");
  v.asr_text = require_string(j, "asr_text");
  v.caption = get_optional<std::string>(j, "caption");
  v.caption_asr_similarity = get_optional<double>(j, "caption_asr_similarity");
  v.status = clip_status_from_string(require_string(j, "status"));
}

void to_json(json& j, const Keyframe& v) {
  j = json{{"frame_id", v.frame_id}, {"clip_id", v.clip_id}, {"timestamp_s", v.timestamp_s},
           {"image_ref", v.image_ref}};
  put_optional(j, "score", v.score);
  put_optional(j, "ocr_text", v.ocr_text);
  j["ocr_kept"] = v.ocr_kept;
  if (v.ocr_failed) j["ocr_failed"] = true;
}

void from_json(const json& j, Keyframe& v) {
  v.frame_id = require_string(j, "frame_id");
  v.clip_id = require_string(j, "clip_id");
  v.timestamp_s = require_number(j, "timestamp_s");
  v.image_ref = require_string(j, "image_ref");
  v.score = get_optional<int>(j, "score");
  v.ocr_text = get_optional<std::string>(j, "ocr_text");
  v.ocr_kept = j.value("ocr_kept", false);
  v.ocr_failed = j.value("ocr_failed", false);
}

void to_json(json& j, const InterleavedElement& v) {
  j = json{{"kind", to_string(v.kind)}};
  if (v.kind == ElementKind::image) {
    j["image_ref"] = v.image_ref;
  } else {
    j["text"] = v.text;
  }
  put_optional(j, "timestamp_s", v.timestamp_s);
}

void from_json(const json& j, InterleavedElement& v) {
  v.kind = element_kind_from_string(require_string(j, "kind"));
  if (v.kind == ElementKind::image) {
    v.image_ref = require_string(j, "image_ref");
    v.text.clear();
  } else {
    v.text = require_string(j, "text");
    v.image_ref.clear();
  }
  v.timestamp_s = get_optional<double>(j, "timestamp_s");
}

std::size_t count_sample_tokens(const std::vector<InterleavedElement>& elements,
                                const Tokenizer& tok) {
  std::size_t n = 0;
  for (const auto& e : elements) {
    if (e.kind == ElementKind::end_of_video) {
      n += 1;
    } else if (e.kind != ElementKind::image) {
      n += tok.count(e.text);
    }
  }
  return n;
}

std::vector<Violation> check_sample(const InterleavedSample& s, const SampleRules& rules) {
  std::vector<Violation> out;
  auto fail = [&](const char* invariant, std::string detail) {
    out.push_back({s.sample_id, 0, invariant, std::move(detail)});
  };
  const Tokenizer& tok = rules.tokenizer ? *rules.tokenizer : default_tokenizer();

  if (s.sample_id.empty()) fail("sample_id", "sample_id must be non-empty");

  std::size_t images = 0;
  for (std::size_t i = 0; i < s.elements.size(); ++i) {
    const auto& e = s.elements[i];
    const auto where = "element " + std::to_string(i);
    switch (e.kind) {
      case ElementKind::image:
        ++images;
        if (e.image_ref.empty()) fail("element_payload", where + ": image without image_ref");
        if (!e.timestamp_s) fail("element_payload", where + ": image without timestamp_s");
        break;
      case ElementKind::end_of_video:
        if (e.text != rules.eov_token)
          fail("eov_token", where + ": end_of_video payload '" + e.text +
                                "' differs from configured token '" + rules.eov_token + "'");
        break;
      default:
        if (e.text.empty()) fail("element_payload", where + ": empty text element");
        break;
    }
  }
  if (images != s.n_images)
    fail("n_images", "declared " + std::to_string(s.n_images) + ", counted " +
                         std::to_string(images));
  if (images < 1) fail("min_images", "sample has no image elements");

  const auto tokens = count_sample_tokens(s.elements, tok);
  if (tokens != s.n_text_tokens)
    fail("n_text_tokens", "declared " + std::to_string(s.n_text_tokens) + ", counted " +
                              std::to_string(tokens));

  // Elements between end_of_video markers belong to one source video, in order.
  std::size_t runs = 0;
  bool run_open = false;
  bool have_t = false;
  double last_t = 0.0;
  for (std::size_t i = 0; i < s.elements.size(); ++i) {
    const auto& e = s.elements[i];
    if (e.kind == ElementKind::end_of_video) {
      if (run_open) ++runs;
      run_open = false;
      have_t = false;
      continue;
    }
    run_open = true;
    if (e.kind == ElementKind::image && e.timestamp_s) {
      if (have_t && *e.timestamp_s < last_t)
        fail("chronology", "element " + std::to_string(i) + " at t=" +
                               std::to_string(*e.timestamp_s) + " precedes t=" +
                               std::to_string(last_t) + " of the same video");
      have_t = true;
      last_t = *e.timestamp_s;
    }
  }
  if (run_open) ++runs;
  if (runs != s.source_video_ids.size())
    fail("source_video_ids", std::to_string(runs) + " video runs but " +
                                 std::to_string(s.source_video_ids.size()) + " source ids");
  std::set<std::string> uniq(s.source_video_ids.begin(), s.source_video_ids.end());
  if (uniq.size() != s.source_video_ids.size())
    fail("source_video_ids", "duplicate source video id");

  if (!s.oversized) {
    if (rules.token_budget && tokens > *rules.token_budget)
      fail("token_budget", std::to_string(tokens) + " tokens exceed budget " +
                               std::to_string(*rules.token_budget));
    if (rules.max_images && images > *rules.max_images)
      fail("image_budget", std::to_string(images) + " images exceed limit " +
                               std::to_string(*rules.max_images));
  }
  return out;
}

json sample_to_json(const InterleavedSample& s) {
  json j = json{{"sample_id", s.sample_id},
                {"source_video_ids", s.source_video_ids},
                {"elements", s.elements},
                {"n_images", s.n_images},
                {"n_text_tokens", s.n_text_tokens}};
  if (s.oversized) j["oversized"] = true;
  return j;
}

InterleavedSample sample_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("record is not an object");
  InterleavedSample s;
  s.sample_id = require_string(j, "sample_id");
  const auto& ids = require(j, "source_video_ids");
  if (!ids.is_array()) throw ValidationError("source_video_ids must be an array");
  s.source_video_ids = ids.get<std::vector<std::string>>();
  const auto& els = require(j, "elements");
  if (!els.is_array()) throw ValidationError("elements must be an array");
  s.elements = els.get<std::vector<InterleavedElement>>();
  auto n_images = require_int(j, "n_images");
  auto n_tokens = require_int(j, "n_text_tokens");
  if (n_images < 0 || n_tokens < 0) throw ValidationError("counts must be non-negative");
  s.n_images = static_cast<std::size_t>(n_images);
  s.n_text_tokens = static_cast<std::size_t>(n_tokens);
  s.oversized = j.value("oversized", false);
  return s;
}

std::string serialize_sample(const InterleavedSample& s, const SampleRules& rules) {
  auto v = check_sample(s, rules);
  if (!v.empty())
    throw ValidationError("sample " + s.sample_id + " violates " + v.front().invariant + ": " +
                          v.front().detail);
  return dump_line(sample_to_json(s));
}

InterleavedSample deserialize_sample(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed record: ") + e.what());
  } catch (const json::type_error& e) {
    throw ValidationError(std::string("malformed record: ") + e.what());
  }
  try {
    return sample_from_json(j);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed record: ") + e.what());
  }
}

CorpusReport validate_corpus(const std::filesystem::path& path, const SampleRules& rules) {
  CorpusReport report;
  for_each_line(path, [&](std::string_view line, std::size_t n) {
    ++report.n_samples;
    InterleavedSample s;
    try {
      s = deserialize_sample(line);
    } catch (const ValidationError& e) {
      report.violations.push_back({"", n, "parse", e.what()});
      return;
    }
    for (auto& v : check_sample(s, rules)) {
      v.line = n;
      report.violations.push_back(std::move(v));
    }
  });
  return report;
}

std::vector<InterleavedSample> read_corpus(const std::filesystem::path& path) {
  std::vector<InterleavedSample> out;
  for_each_line(path, [&](std::string_view line, std::size_t n) {
    try {
      out.push_back(deserialize_sample(line));
    } catch (const ValidationError& e) {
      throw ValidationError(path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  });
  return out;
}

void write_corpus(const std::filesystem::path& path, const std::vector<InterleavedSample>& samples) {
  std::string buf;
  for (const auto& s : samples) {
    buf += dump_line(sample_to_json(s));
    buf += '\n';
  }
  write_file_atomic(path, buf);
}

json report_to_json(const CorpusReport& r) {
  json v = json::array();
  for (const auto& x : r.violations) {
    v.push_back(json{{"sample_id", x.sample_id}, {"line", x.line},
                     {"invariant", x.invariant}, {"detail", x.detail}});
  }
  return json{{"n_samples", r.n_samples}, {"n_violations", r.n_violations()}, {"violations", v}};
}

}  // namespace vtb
