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

#include "core/assembler.hpp"

#include <cmath>
#include <cstdio>

#include "core/error.hpp"
#include "core/text_util.hpp"

namespace vtb {

std::vector<InterleavedElement> interleave_video(const VideoFrames& video, bool use_ocr) {
  std::vector<InterleavedElement> out;
  for (const auto& c : video.clips) {
    if (c.clip.status == ClipStatus::pending)
      throw StageError("interleave_video: clip " + c.clip.clip_id + " of " + video.video_id +
                       " is still pending");
    if (c.clip.status == ClipStatus::kept) {
      std::vector<std::string> ocr;
      for (const auto& kf : c.keyframes) {
        if (kf.clip_id != c.clip.clip_id)
          throw StageError("interleave_video: keyframe " + kf.frame_id + " filed under clip " +
                           c.clip.clip_id);
        out.push_back(InterleavedElement::image(kf.image_ref, kf.timestamp_s));
        if (use_ocr && kf.ocr_kept && kf.ocr_text && !kf.ocr_text->empty())
          ocr.push_back(*kf.ocr_text);
      }
      if (!ocr.empty()) out.push_back(InterleavedElement::ocr(text::join(ocr, "\n")));
    }
    if (!c.clip.asr_text.empty()) out.push_back(InterleavedElement::asr(c.clip.asr_text));
  }
  return out;
}

std::vector<Fragment> make_fragments(const VideoElements& video, const Tokenizer& tok) {
  std::vector<Fragment> frags;
  std::vector<InterleavedElement> leading;
  bool after_text = true;
  for (const auto& e : video.elements) {
    if (e.kind == ElementKind::end_of_video) continue;
    if (e.kind == ElementKind::image) {
      if (after_text || frags.empty()) {
        Fragment f;
        f.video_id = video.video_id;
        if (frags.empty()) {
          for (auto& l : leading) {
            f.tokens += tok.count(l.text);
            f.elements.push_back(std::move(l));
          }
          leading.clear();
        }
        frags.push_back(std::move(f));
      }
      ++frags.back().images;
      frags.back().elements.push_back(e);
      after_text = false;
    } else {
      if (frags.empty()) {
        leading.push_back(e);
      } else {
        frags.back().tokens += tok.count(e.text);
        frags.back().elements.push_back(e);
      }
      after_text = true;
    }
  }
  return frags;
}

namespace {

class SampleBuilder {
 public:
  SampleBuilder(const PackOptions& opts, std::vector<InterleavedSample>& out)
      : opts_(opts), out_(out) {}

  bool empty() const { return cur_.elements.empty(); }
  std::size_t tokens() const { return cur_.n_text_tokens; }
  std::size_t images() const { return cur_.n_images; }

  void add(const Fragment& f) {
    if (cur_.source_video_ids.empty() || !run_open_) {
      cur_.source_video_ids.push_back(f.video_id);
      run_open_ = true;
    }
    cur_.elements.insert(cur_.elements.end(), f.elements.begin(), f.elements.end());
    cur_.n_text_tokens += f.tokens;
    cur_.n_images += f.images;
    ++fragments_;
  }

  void add_eov() {
    cur_.elements.push_back(InterleavedElement::eov(opts_.eov_token));
    cur_.n_text_tokens += 1;
    run_open_ = false;
  }

  void close() {
    if (empty()) return;
    char id[32];
    std::snprintf(id, sizeof id, "-%06zu", out_.size() + 1);
    cur_.sample_id = opts_.id_prefix + id;
    if (fragments_ == 1 && opts_.strategy != PackingStrategy::per_video)
      cur_.oversized = cur_.n_text_tokens > opts_.token_budget || cur_.n_images > opts_.max_images;
    out_.push_back(std::move(cur_));
    cur_ = InterleavedSample{};
    fragments_ = 0;
    run_open_ = false;
  }

 private:
  const PackOptions& opts_;
  std::vector<InterleavedSample>& out_;
  InterleavedSample cur_;
  std::size_t fragments_ = 0;
  bool run_open_ = false;
};

}  // namespace

PackResult pack(const std::vector<VideoElements>& videos, const PackOptions& opts) {
  if (opts.strategy != PackingStrategy::per_video && (opts.token_budget == 0 || opts.max_images == 0))
    throw ArgumentError("pack: budgets must be positive");
  const Tokenizer& tok = opts.tokenizer ? *opts.tokenizer : default_tokenizer();
  PackResult result;
  SampleBuilder b(opts, result.samples);

  for (const auto& v : videos) {
    auto frags = make_fragments(v, tok);
    if (frags.empty()) {
      result.excluded.push_back({v.video_id, "no_images"});
      continue;
    }
    if (opts.strategy == PackingStrategy::per_video) {
      for (const auto& f : frags) b.add(f);
      b.close();
      continue;
    }
    const bool concat = opts.strategy == PackingStrategy::concat;
    for (std::size_t i = 0; i < frags.size(); ++i) {
      const auto& f = frags[i];
      const bool last = i + 1 == frags.size();
      const std::size_t cost = f.tokens + (concat && last ? 1 : 0);
      if (!b.empty() &&
          (b.tokens() + cost > opts.token_budget || b.images() + f.images > opts.max_images))
        b.close();
      b.add(f);
      if (concat && last) b.add_eov();
      // A fragment that cannot share a sample closes it immediately.
      if (b.tokens() > opts.token_budget || b.images() > opts.max_images) b.close();
    }
    if (!concat) b.close();
  }
  b.close();
  return result;
}

namespace {

CountStats count_stats(const std::vector<std::size_t>& v) {
  CountStats s;
  if (v.empty()) return s;
  s.min = v.front();
  s.max = v.front();
  double sum = 0.0;
  for (auto x : v) {
    s.min = std::min(s.min, x);
    s.max = std::max(s.max, x);
    sum += static_cast<double>(x);
  }
  s.avg = std::round(sum / static_cast<double>(v.size()) * 10.0) / 10.0;
  return s;
}

json count_json(const CountStats& s) { return json{{"min", s.min}, {"max", s.max}, {"avg", s.avg}}; }

}  // namespace

CorpusStats compute_stats(const std::vector<InterleavedSample>& samples) {
  std::vector<std::size_t> images, tokens;
  for (const auto& s : samples) {
    images.push_back(s.n_images);
    tokens.push_back(s.n_text_tokens);
  }
  return {samples.size(), count_stats(images), count_stats(tokens)};
}

json stats_to_json(const CorpusStats& s) {
  return json{{"n_samples", s.n_samples}, {"images", count_json(s.images)},
              {"tokens", count_json(s.tokens)}};
}

void emit(const std::vector<InterleavedSample>& samples, const std::filesystem::path& out,
          const SampleRules& rules) {
  std::string body;
  for (const auto& s : samples) {
    body += serialize_sample(s, rules);
    body += '\n';
  }
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
  write_file_atomic(out, body);
}

}  // namespace vtb
