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

#include "core/keyframes.hpp"

#include <cmath>

#include "core/error.hpp"
#include "core/ssim.hpp"

namespace vtb {

std::vector<double> sample_times(double start_s, double end_s, double fps) {
  if (!(fps > 0.0)) throw ArgumentError("sample_times: fps must be positive");
  if (end_s < start_s) throw ArgumentError("sample_times: end before start");
  const double d = end_s - start_s;
  const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(d * fps + 1e-9)));
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(start_s + static_cast<double>(i) / fps);
  return out;
}

std::vector<Frame> sample_frames(MediaToolkit& media, const std::filesystem::path& video,
                                 double start_s, double end_s, double fps) {
  std::vector<Frame> out;
  std::size_t i = 0;
  for (double t : sample_times(start_s, end_s, fps)) {
    out.push_back({i++, t, media.frame_at(video, t)});
    if (!out.back().pixels.same_shape(out.front().pixels))
      throw IoError("sample_frames: frame size changed within " + video.string());
  }
  return out;
}

std::vector<std::size_t> select_keyframes(
    std::size_t n, const std::function<bool(std::size_t, std::size_t)>& changed) {
  std::vector<std::size_t> keys;
  if (n == 0) return keys;
  keys.push_back(0);
  std::size_t ref = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (changed(ref, i)) {
      keys.push_back(i);
      ref = i;
    }
  }
  return keys;
}

namespace {

// Runs the chain with an external reference in front of the sequence.
template <typename T, typename Changed>
std::vector<std::size_t> chain(const std::vector<T>& items, const T* carried, Changed changed) {
  if (!carried) {
    return select_keyframes(items.size(),
                            [&](std::size_t r, std::size_t i) { return changed(items[r], items[i]); });
  }
  std::vector<std::size_t> keys;
  const T* ref = carried;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (changed(*ref, items[i])) {
      keys.push_back(i);
      ref = &items[i];
    }
  }
  return keys;
}

std::vector<GrayImage> pixels_of(const std::vector<Frame>& frames) {
  std::vector<GrayImage> out;
  out.reserve(frames.size());
  for (const auto& f : frames) out.push_back(f.pixels);
  return out;
}

std::vector<Frame> pick(const std::vector<Frame>& frames, const std::vector<std::size_t>& idx) {
  std::vector<Frame> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(frames[i]);
  return out;
}

}  // namespace

std::vector<std::size_t> keyframes_ssim(const std::vector<GrayImage>& frames, double T,
                                        const GrayImage* carried) {
  return chain(frames, carried,
               [T](const GrayImage& r, const GrayImage& f) { return compute_ssim(r, f) < T; });
}

std::vector<std::size_t> keyframes_pixel(const std::vector<GrayImage>& frames,
                                         double pixel_threshold, const GrayImage* carried) {
  return chain(frames, carried, [pixel_threshold](const GrayImage& r, const GrayImage& f) {
    return mean_abs_diff(r, f) > pixel_threshold;
  });
}

std::vector<std::size_t> keyframes_semantic(const std::vector<EmbeddingVector>& embeddings,
                                            double cos_threshold,
                                            const EmbeddingVector* carried) {
  return chain(embeddings, carried,
               [cos_threshold](const EmbeddingVector& r, const EmbeddingVector& f) {
                 return cosine(r, f) < cos_threshold;
               });
}

std::vector<Frame> extract_keyframes_ssim(const std::vector<Frame>& frames, double T) {
  return pick(frames, keyframes_ssim(pixels_of(frames), T));
}

std::vector<Frame> extract_keyframes_pixel(const std::vector<Frame>& frames,
                                           double pixel_threshold) {
  return pick(frames, keyframes_pixel(pixels_of(frames), pixel_threshold));
}

std::vector<Frame> extract_keyframes_semantic(
    const std::vector<Frame>& frames,
    const std::function<std::vector<EmbeddingVector>(const std::vector<Frame>&)>& embed,
    double cos_threshold) {
  if (frames.empty()) return {};
  auto vecs = embed(frames);
  if (vecs.size() != frames.size())
    throw ProtocolError("extract_keyframes_semantic: embedding count mismatch");
  return pick(frames, keyframes_semantic(vecs, cos_threshold));
}

}  // namespace vtb
