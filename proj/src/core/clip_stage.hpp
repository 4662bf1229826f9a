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

#include <filesystem>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/corpus_model.hpp"
#include "core/services.hpp"

namespace vtb {

// Greedy paragraph merge. A paragraph closes once it spans clip_target_s, or
// before a segment that would stretch it past clip_max_s. A final paragraph
// shorter than clip_min_s joins its predecessor when the result fits in
// clip_max_s. A segment longer than clip_max_s stands alone.
// Throws ValidationError on unordered or overlapping input.
std::vector<AsrSegment> merge_segments(const std::vector<AsrSegment>& segments,
                                       const PipelineConfig& cfg);

// One clip per paragraph, ids "<video_id>_c<nnn>". Throws ValidationError
// when a paragraph runs past the video end.
std::vector<VideoClip> cut_clips(const std::string& video_id, double video_duration_s,
                                 const std::vector<AsrSegment>& paragraphs);

// Timestamps of the frames sent to the captioner: up to `n`, at the centres of
// equal sub-spans of the clip.
std::vector<double> caption_frame_times(const VideoClip& clip, std::size_t n);

// Captions the clip from `frames`, embeds caption and ASR, and sets status.
// Transport failure leaves the clip pending.
VideoClip visual_filter(VideoClip clip, const std::vector<std::filesystem::path>& frames,
                        Services& services, double threshold);

}  // namespace vtb
