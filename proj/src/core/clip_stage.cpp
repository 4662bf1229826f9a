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

#include "core/clip_stage.hpp"

#include <cstdio>

#include "core/error.hpp"
#include "core/text_util.hpp"

namespace vtb {

namespace {

struct Open {
  double start = 0.0;
  double end = 0.0;
  std::vector<std::string> texts;
  bool empty = true;

  void add(const AsrSegment& s) {
    if (empty) start = s.start_s;
    end = s.end_s;
    if (!s.text.empty()) texts.push_back(s.text);
    empty = false;
  }
  AsrSegment close() {
    AsrSegment p{start, end, text::join(texts, " "), texts.empty()};
    *this = Open{};
    return p;
  }
};

}  // namespace

std::vector<AsrSegment> merge_segments(const std::vector<AsrSegment>& segments,
                                       const PipelineConfig& cfg) {
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    if (!(s.start_s >= 0.0 && s.start_s < s.end_s))
      throw ValidationError("merge_segments: segment " + std::to_string(i) + " has an invalid span");
    if (i > 0 && s.start_s < segments[i - 1].end_s)
      throw ValidationError("merge_segments: segment " + std::to_string(i) +
                            " overlaps or precedes its predecessor");
  }

  std::vector<AsrSegment> out;
  Open cur;
  for (const auto& s : segments) {
    if (!cur.empty && s.end_s - cur.start > cfg.clip_max_s) out.push_back(cur.close());
    cur.add(s);
    if (cur.end - cur.start >= cfg.clip_target_s) out.push_back(cur.close());
  }
  if (!cur.empty) out.push_back(cur.close());

  if (out.size() >= 2) {
    auto& last = out.back();
    auto& prev = out[out.size() - 2];
    if (last.end_s - last.start_s < cfg.clip_min_s && last.end_s - prev.start_s <= cfg.clip_max_s) {
      if (!last.text.empty()) prev.text = prev.text.empty() ? last.text : prev.text + " " + last.text;
      prev.end_s = last.end_s;
      prev.silent = prev.text.empty();
      out.pop_back();
    }
  }
  return out;
}

std::vector<VideoClip> cut_clips(const std::string& video_id, double video_duration_s,
                                 const std::vector<AsrSegment>& paragraphs) {
  std::vector<VideoClip> clips;
  for (std::size_t i = 0; i < paragraphs.size(); ++i) {
    const auto& p = paragraphs[i];
    if (p.end_s > video_duration_s + 1e-6)
      throw ValidationError("cut_clips: paragraph " + std::to_string(i) + " ends at " +
                            std::to_string(p.end_s) + " s, past the video end " +
                            std::to_string(video_duration_s) + " s");
    char id[32];
    std::snprintf(id, sizeof id, "_c%03zu", i);
    VideoClip c;
    c.clip_id = video_id + id;
    c.video_id = video_id;
    c.start_s = p.start_s;
    c.end_s = p.end_s;
    c.asr_text = p.text;
    c.status = ClipStatus::pending;
    clips.push_back(std::move(c));
  }
  return clips;
}

std::vector<double> caption_frame_times(const VideoClip& clip, std::size_t n) {
  if (n == 0) n = 1;
  const double d = clip.end_s - clip.start_s;
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k)
    out.push_back(clip.start_s + d * (static_cast<double>(k) + 0.5) / static_cast<double>(n));
  return out;
}

VideoClip visual_filter(VideoClip clip, const std::vector<std::filesystem::path>& frames,
                        Services& services, double threshold) {
  try {
    auto caption = services.caption_clip(frames);
    if (clip.asr_text.empty()) {
      // Nothing to compare against; the clip carries no speech to anchor it.
      clip.caption = std::move(caption);
      clip.caption_asr_similarity = 0.0;
      clip.status = ClipStatus::dropped_visual;
      return clip;
    }
    auto vecs = services.embed_texts({caption, clip.asr_text});
    if (vecs.size() != 2) throw ProtocolError("visual_filter: expected 2 embeddings");
    const double sim = cosine(vecs[0], vecs[1]);
    clip.caption = std::move(caption);
    clip.caption_asr_similarity = sim;
    clip.status = sim >= threshold ? ClipStatus::kept : ClipStatus::dropped_visual;
  } catch (const TransportError&) {
    clip.status = ClipStatus::pending;
  }
  return clip;
}

}  // namespace vtb
