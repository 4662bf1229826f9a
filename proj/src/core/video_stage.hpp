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
#include "core/media.hpp"
#include "core/services.hpp"

namespace vtb {

struct RuleResult {
  bool pass = true;
  std::string reason;  // non_english | too_short | too_few_tokens
};

struct JudgeResult {
  std::string judge_id;
  bool reachable = true;
  bool pass = false;
  CriteriaScores scores;
  std::string error;  // set when unreachable
};

struct VideoVerdict {
  enum class Final { kept, dropped, pending };

  std::string video_id;
  RuleResult rule_result;
  std::vector<JudgeResult> judge_results;
  Final final = Final::kept;
  std::string reason;  // drop reason or pending cause
};

const char* to_string(VideoVerdict::Final f);
json verdict_to_json(const VideoVerdict& v);

bool is_english(const std::string& language_tag);

// Writes <out_dir>/<video_id>.wav.
AudioInfo extract_audio(MediaToolkit& media, const VideoMeta& meta,
                        const std::filesystem::path& out_dir);

std::size_t transcript_tokens(const std::vector<AsrSegment>& segments,
                              const Tokenizer& tok = default_tokenizer());
std::string transcript_text(const std::vector<AsrSegment>& segments);

// Checks run in order too_short, too_few_tokens, non_english. A silent video
// has no tokens and an "unknown" language, so it fails as too_few_tokens.
RuleResult rule_filter(const VideoMeta& meta, const Transcription& transcript,
                       const PipelineConfig& cfg);

// Dropped iff every judge that answered failed. A single unreachable judge
// leaves the decision to the others; with none reachable the verdict is pending.
bool judges_drop(const std::vector<JudgeResult>& results);

VideoVerdict judge_filter(const std::string& video_id, const std::string& transcript,
                          const KnowledgePoint& point, Services& services,
                          const std::vector<std::string>& judge_ids, int pass_threshold);

// Rewrites every non-empty segment, keeping its timestamps. A failed rewrite
// keeps the raw text and records the index. Perplexities are filled when
// `ppl` is given and both texts are non-empty.
RefinedTranscript refine_transcript(const std::string& video_id, const Transcription& raw,
                                    Services& refine, Services* ppl);

}  // namespace vtb
