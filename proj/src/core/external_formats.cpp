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

#include <map>

#include "core/error.hpp"
#include "core/metrics.hpp"

namespace vtb {

namespace fs = std::filesystem;

namespace {

std::string image_ref_of(const json& info) {
  for (const char* key : {"image_name", "raw_url", "url", "image_ref"}) {
    auto it = info.find(key);
    if (it != info.end() && it->is_string() && !it->get<std::string>().empty()) return it->get<std::string>();
  }
  throw ValidationError("image entry without image_name or raw_url");
}

InterleavedSample from_matched_list(const json& j) {
  const auto& texts = require(j, "text_list");
  const auto& infos = require(j, "image_info");
  if (!texts.is_array() || !infos.is_array())
    throw ValidationError("text_list and image_info must be arrays");
  std::map<std::size_t, std::vector<std::string>> before;
  for (const auto& info : infos) {
    const auto idx = require_int(info, "matched_text_index");
    if (idx < 0 || static_cast<std::size_t>(idx) >= texts.size())
      throw ValidationError("matched_text_index " + std::to_string(idx) + " out of range");
    before[static_cast<std::size_t>(idx)].push_back(image_ref_of(info));
  }
  InterleavedSample s;
  double ordinal = 0.0;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    for (auto& ref : before[i]) s.elements.push_back(InterleavedElement::image(ref, ordinal++));
    if (!texts[i].is_string()) throw ValidationError("text_list entry " + std::to_string(i) + " is not a string");
    auto t = texts[i].get<std::string>();
    if (!t.empty()) s.elements.push_back(InterleavedElement::asr(std::move(t)));
  }
  return s;
}

InterleavedSample from_parallel_list(const json& j) {
  const auto& images = require(j, "images");
  const auto& texts = require(j, "texts");
  if (!images.is_array() || !texts.is_array()) throw ValidationError("images and texts must be arrays");
  if (images.size() != texts.size())
    throw ValidationError("images has " + std::to_string(images.size()) + " entries, texts " +
                          std::to_string(texts.size()));
  InterleavedSample s;
  double ordinal = 0.0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const bool img = !images[i].is_null(), txt = !texts[i].is_null();
    if (img == txt)
      throw ValidationError("position " + std::to_string(i) + " must hold exactly one of image or text");
    if (img) {
      if (!images[i].is_string()) throw ValidationError("image at position " + std::to_string(i) + " is not a string");
      s.elements.push_back(InterleavedElement::image(images[i].get<std::string>(), ordinal++));
    } else {
      if (!texts[i].is_string()) throw ValidationError("text at position " + std::to_string(i) + " is not a string");
      auto t = texts[i].get<std::string>();
      if (!t.empty()) s.elements.push_back(InterleavedElement::asr(std::move(t)));
    }
  }
  return s;
}

}  // namespace

AdaptResult adapt_external(const fs::path& path, const std::string& format) {
  InterleavedSample (*convert)(const json&) = nullptr;
  if (format == "matched-list") {
    convert = from_matched_list;
  } else if (format == "parallel-list") {
    convert = from_parallel_list;
  } else {
    throw ArgumentError("adapt_external: unknown format '" + format +
                        "' (expected matched-list or parallel-list)");
  }
  if (!fs::exists(path)) throw IoError("adapt_external: cannot read " + path.string());

  AdaptResult r;
  const auto stem = path.filename().string();
  for_each_line(path, [&](std::string_view line, std::size_t no) {
    try {
      auto j = json::parse(line);
      if (!j.is_object()) throw ValidationError("record is not an object");
      auto s = convert(j);
      s.sample_id = j.contains("id") && j["id"].is_string() ? j["id"].get<std::string>()
                                                            : stem + ":" + std::to_string(no);
      s.source_video_ids = {s.sample_id};
      for (const auto& e : s.elements) {
        if (e.kind == ElementKind::image) ++s.n_images;
        else s.n_text_tokens += count_tokens(e.text);
      }
      if (s.n_images == 0) {
        ++r.skipped_no_images;
        return;
      }
      r.samples.push_back(std::move(s));
    } catch (const json::exception& e) {
      r.errors.push_back({no, std::string("malformed JSON: ") + e.what()});
    } catch (const ValidationError& e) {
      r.errors.push_back({no, e.what()});
    }
  });
  return r;
}

}  // namespace vtb
