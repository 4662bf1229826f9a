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

#include "core/video_stage.hpp"

#include "core/error.hpp"
#include "core/text_util.hpp"

namespace vtb {

namespace fs = std::filesystem;

const char* to_string(VideoVerdict::Final f) {
  switch (f) {
    case VideoVerdict::Final::kept: return "kept";
    case VideoVerdict::Final::dropped: return "dropped";
    case VideoVerdict::Final::pending: return "pending";
  }
  return "pending";
}

json verdict_to_json(const VideoVerdict& v) {
  json judges = json::array();
  for (const auto& r : v.judge_results) {
    json j{{"judge_id", r.judge_id}, {"reachable", r.reachable}, {"pass", r.pass}};
    if (r.reachable) {
      j["scores"] = json{{"relevance", r.scores.relevance},
                         {"knowledge_density", r.scores.knowledge_density},
                         {"transcription_quality", r.scores.transcription_quality}};
    } else {
      j["error"] = r.error;
    }
    judges.push_back(std::move(j));
  }
  json rule{{"pass", v.rule_result.pass}};
  if (!v.rule_result.pass) rule["reason"] = v.rule_result.reason;
  json out{{"video_id", v.video_id}, {"rule_result", rule}, {"judge_results", judges},
           {"final", to_string(v.final)}};
  if (!v.reason.empty()) out["reason"] = v.reason;
  return out;
}

bool is_english(const std::string& tag) {
  auto t = text::to_lower(tag);
  return t == "en" || t == "english" || t.rfind("en-", 0) == 0 || t.rfind("en_", 0) == 0;
}

AudioInfo extract_audio(MediaToolkit& media, const VideoMeta& meta, const fs::path& out_dir) {
  if (meta.media_ref.empty()) throw StageError("video " + meta.video_id + " has no media_ref");
  fs::create_directories(out_dir);
  return media.extract_audio(meta.media_ref, out_dir / (meta.video_id + ".wav"));
}

std::size_t transcript_tokens(const std::vector<AsrSegment>& segments, const Tokenizer& tok) {
  std::size_t n = 0;
  for (const auto& s : segments) n += tok.count(s.text);
  return n;
}

std::string transcript_text(const std::vector<AsrSegment>& segments) {
  std::vector<std::string> parts;
  for (const auto& s : segments)
    if (!s.text.empty()) parts.push_back(s.text);
  return text::join(parts, " ");
}

RuleResult rule_filter(const VideoMeta& meta, const Transcription& transcript,
                       const PipelineConfig& cfg) {
  if (meta.duration_s < cfg.min_duration_s) return {false, "too_short"};
  if (transcript_tokens(transcript.segments) < static_cast<std::size_t>(cfg.min_asr_tokens))
    return {false, "too_few_tokens"};
  if (!is_english(transcript.language)) return {false, "non_english"};
  return {true, {}};
}

bool judges_drop(const std::vector<JudgeResult>& results) {
  bool any = false;
  for (const auto& r : results) {
    if (!r.reachable) continue;
    any = true;
    if (r.pass) return false;
  }
  return any;
}

VideoVerdict judge_filter(const std::string& video_id, const std::string& transcript,
                          const KnowledgePoint& point, Services& services,
                          const std::vector<std::string>& judge_ids, int pass_threshold) {
  if (judge_ids.empty()) throw ArgumentError("judge_filter: no judges configured");
  VideoVerdict v;
  v.video_id = video_id;
  for (const auto& id : judge_ids) {
    JudgeResult r;
    r.judge_id = id;
    try {
      r.scores = services.score(transcript, point, id, ScoreKind::transcript);
      r.pass = r.scores.all_at_least(pass_threshold);
    } catch (const TransportError& e) {
      r.reachable = false;
      r.error = e.what();
    }
    v.judge_results.push_back(std::move(r));
  }
  bool any_reachable = false;
  for (const auto& r : v.judge_results) any_reachable |= r.reachable;
  if (!any_reachable) {
    v.final = VideoVerdict::Final::pending;
    v.reason = "judges_unreachable";
  } else if (judges_drop(v.judge_results)) {
    v.final = VideoVerdict::Final::dropped;
    v.reason = "criteria";
  }
  return v;
}

RefinedTranscript refine_transcript(const std::string& video_id, const Transcription& raw,
                                    Services& refine, Services* ppl) {
  RefinedTranscript out;
  out.video_id = video_id;
  out.language = raw.language;
  out.raw_segments = raw.segments;
  for (std::size_t i = 0; i < raw.segments.size(); ++i) {
    AsrSegment seg = raw.segments[i];
    if (!seg.text.empty()) {
      try {
        seg.text = refine.refine_text(seg.text);
      } catch (const Error&) {
        out.refine_failures.push_back(i);
      }
    }
    out.refined_paragraphs.push_back(std::move(seg));
  }
  if (ppl) {
    auto raw_text = transcript_text(out.raw_segments);
    auto refined_text = transcript_text(out.refined_paragraphs);
    if (!text::words(raw_text).empty() && !text::words(refined_text).empty()) {
      try {
        out.ppl_raw = ppl->perplexity(raw_text);
        out.ppl_refined = ppl->perplexity(refined_text);
      } catch (const Error&) {
        out.ppl_raw.reset();
        out.ppl_refined.reset();
      }
    }
  }
  return out;
}

}  // namespace vtb
