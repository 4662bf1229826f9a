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

#include "core/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "core/error.hpp"
#include "core/ssim.hpp"
#include "core/text_util.hpp"

namespace vtb {

namespace fs = std::filesystem;

double insi_sim_sample(const std::vector<GrayImage>& images,
                       const std::vector<EmbeddingVector>& embeddings) {
  const std::size_t n = images.size();
  if (n < 2) throw ArgumentError("insi_sim_sample: need at least two images");
  if (embeddings.size() != n) throw ArgumentError("insi_sim_sample: embedding count mismatch");
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double structural;
      if (images[i].same_shape(images[j])) {
        structural = compute_ssim(images[i], images[j]);
      } else {
        const int w = std::min(images[i].width, images[j].width);
        const int h = std::min(images[i].height, images[j].height);
        structural = compute_ssim(resize_area(images[i], w, h), resize_area(images[j], w, h));
      }
      sum += (cosine(embeddings[i], embeddings[j]) + structural) / 2.0;
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

json insi_sim_report_to_json(const InSiSimReport& r) {
  json per_l = json::object(), counts = json::object(), other = json::object(),
       other_counts = json::object();
  for (const auto& [l, v] : r.per_L) per_l[std::to_string(l)] = v;
  for (const auto& [l, v] : r.n_samples_per_L) counts[std::to_string(l)] = v;
  for (const auto& [l, v] : r.other_L) other[std::to_string(l)] = v;
  for (const auto& [l, v] : r.n_samples_other_L) other_counts[std::to_string(l)] = v;
  return json{{"per_L", per_l},
              {"n_samples_per_L", counts},
              {"overall_avg", r.overall_avg},
              {"other_L", other},
              {"n_samples_other_L", other_counts},
              {"n_excluded", r.n_excluded}};
}

std::string insi_sim_report_csv(const InSiSimReport& r) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << "L,score,n_samples\n";
  for (const auto& [l, v] : r.per_L) os << l << ',' << v << ',' << r.n_samples_per_L.at(l) << '\n';
  return os.str();
}

InSiSimReport insi_sim(const std::vector<InterleavedSample>& samples, Services& services,
                       const std::function<fs::path(const std::string&)>& resolve) {
  std::map<int, std::pair<double, std::size_t>> acc;
  InSiSimReport r;
  for (const auto& s : samples) {
    std::vector<fs::path> paths;
    for (const auto& e : s.elements)
      if (e.kind == ElementKind::image) paths.push_back(resolve ? resolve(e.image_ref) : fs::path(e.image_ref));
    if (paths.size() < 2) {
      ++r.n_excluded;
      continue;
    }
    std::vector<GrayImage> images;
    images.reserve(paths.size());
    for (const auto& p : paths) images.push_back(load_gray(p));
    auto score = insi_sim_sample(images, services.embed_images(paths));
    auto& a = acc[static_cast<int>(paths.size())];
    a.first += score;
    a.second += 1;
  }
  double bucket_sum = 0.0;
  for (const auto& [l, a] : acc) {
    const double mean = a.first / static_cast<double>(a.second);
    if (l >= 4 && l <= 8) {
      r.per_L[l] = mean;
      r.n_samples_per_L[l] = a.second;
      bucket_sum += mean;
    } else {
      r.other_L[l] = mean;
      r.n_samples_other_L[l] = a.second;
    }
  }
  if (!r.per_L.empty()) r.overall_avg = bucket_sum / static_cast<double>(r.per_L.size());
  return r;
}

namespace {

// Portable across standard libraries: uses only raw engine output.
std::size_t uniform_below(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(n));
}

template <typename T>
void fisher_yates(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_below(rng, i)]);
}

}  // namespace

ShuffleResult shuffle_images(const std::vector<InterleavedSample>& samples, double p,
                             std::uint64_t seed) {
  if (!(p > 0.0 && p <= 1.0)) throw ArgumentError("shuffle_images: p must be in (0, 1]");
  const std::size_t n = samples.size();
  const auto k = std::min<std::size_t>(
      n, static_cast<std::size_t>(std::ceil(p * static_cast<double>(n) - 1e-9)));

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = 0; i < k; ++i) std::swap(order[i], order[i + uniform_below(rng, n - i)]);
  ShuffleResult out{samples, std::vector<std::size_t>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k))};
  std::sort(out.selected.begin(), out.selected.end());

  for (auto idx : out.selected) {
    auto& s = out.samples[idx];
    std::vector<std::size_t> slots;
    std::vector<InterleavedElement> images;
    for (std::size_t i = 0; i < s.elements.size(); ++i) {
      if (s.elements[i].kind == ElementKind::image) {
        slots.push_back(i);
        images.push_back(s.elements[i]);
      }
    }
    auto permuted = images;
    fisher_yates(permuted, rng);
    std::set<std::string> distinct;
    for (const auto& e : images) distinct.insert(e.image_ref);
    if (permuted == images && distinct.size() >= 2)
      std::rotate(permuted.begin(), permuted.begin() + 1, permuted.end());
    for (std::size_t i = 0; i < slots.size(); ++i) s.elements[slots[i]] = std::move(permuted[i]);
  }
  return out;
}

PplReport ppl_report(const std::vector<InterleavedSample>& samples, Services& services) {
  PplReport r;
  double sum = 0.0;
  for (const auto& s : samples) {
    std::vector<std::string> texts;
    for (const auto& e : s.elements)
      if (e.kind == ElementKind::asr_text || e.kind == ElementKind::ocr_text) texts.push_back(e.text);
    auto joined = text::join(texts, " ");
    if (text::words(joined).empty()) {
      ++r.skipped;
      continue;
    }
    try {
      const double v = services.perplexity(joined);
      r.per_sample.emplace_back(s.sample_id, v);
      sum += v;
    } catch (const Error&) {
      ++r.skipped;
    }
  }
  if (!r.per_sample.empty()) r.mean_ppl = sum / static_cast<double>(r.per_sample.size());
  return r;
}

json ppl_report_to_json(const PplReport& r) {
  json per = json::array();
  for (const auto& [id, v] : r.per_sample) per.push_back(json{{"sample_id", id}, {"ppl", v}});
  return json{{"mean_ppl", r.mean_ppl}, {"n_scored", r.per_sample.size()}, {"skipped", r.skipped},
              {"per_sample", per}};
}

}  // namespace vtb
