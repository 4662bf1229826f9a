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

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "core/config.hpp"
#include "core/error.hpp"
#include "core/hash.hpp"
#include "core/image.hpp"
#include "core/manifest.hpp"
#include "core/media.hpp"
#include "core/synthetic_video.hpp"
#include "core/text_util.hpp"
#include "core/tokenizer.hpp"

using namespace vtb;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const char* name) {
  auto d = fs::temp_directory_path() / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

ManifestEntry entry(const std::string& key, const std::string& hash) {
  ManifestEntry e;
  e.input_key = key;
  e.input_hash = hash;
  e.output_keys = {key + ".json"};
  return e;
}

json minimal_config() {
  return json{{"services", {{"mode", "mock"}}},
              {"inputs", {{"taxonomy", "taxonomy.json"}, {"search_backend", "fixture:search"}}}};
}

}  // namespace

TEST_CASE("sha256 known answers") {
  CHECK(sha256_hex(std::string_view("")) ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex(std::string_view("abc")) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  Sha256 h;
  h.update(std::string_view("a")).update(std::string_view("bc"));
  CHECK(h.hex() == sha256_hex(std::string_view("abc")));
}

TEST_CASE("text helpers") {
  CHECK(text::words("Hello, World! it's 3D") == std::vector<std::string>{"hello", "world", "it's", "3d"});
  CHECK(text::collapse_whitespace("  a \t b\n") == "a b");
  CHECK(text::is_filler("um"));
  CHECK_FALSE(text::is_filler("angle"));
  CHECK(text::jaccard({"a", "b"}, {"b", "c"}) == doctest::Approx(1.0 / 3));
  CHECK(text::jaccard({}, {}) == doctest::Approx(1.0));
  CHECK(count_tokens("  three  short words ") == 3);
  CHECK(count_tokens("") == 0);
}

TEST_CASE("manifest survives reopen and drops a torn tail") {
  auto dir = scratch("vtb_unit_manifest");
  const auto file = dir / "m.jsonl";
  {
    Manifest m(file, "video", true);
    m.commit(entry("a", "h1"));
    m.commit(entry("b", "h2"));
    m.commit(entry("a", "h3"));
  }
  {
    std::ofstream out(file, std::ios::app);
    out << R"({"input_key":"c","inp)";
  }
  const auto torn = fs::file_size(file);
  Manifest m(file, "video", true);
  CHECK(fs::file_size(file) < torn);
  CHECK(m.size() == 2);
  CHECK(m.is_complete("a", "h3"));
  CHECK_FALSE(m.is_complete("a", "h1"));
  CHECK(m.is_complete("b", "h2"));
  CHECK_FALSE(m.find("c").has_value());
  fs::remove_all(dir);
}

TEST_CASE("a corrupt manifest record before the tail is an error") {
  auto dir = scratch("vtb_unit_manifest_bad");
  const auto file = dir / "m.jsonl";
  write_file_atomic(file, "{not json}\n{\"also\": 1}\n");
  CHECK_THROWS_AS(Manifest(file, "video", true), ValidationError);
  fs::remove_all(dir);
}

TEST_CASE("logical clock stamps are deterministic") {
  auto dir = scratch("vtb_unit_manifest_clock");
  Manifest a(dir / "a.jsonl", "clip", true);
  Manifest b(dir / "b.jsonl", "clip", true);
  a.commit(entry("x", "1"));
  b.commit(entry("x", "1"));
  CHECK(read_text_file(dir / "a.jsonl") == read_text_file(dir / "b.jsonl"));
  fs::remove_all(dir);
}

TEST_CASE("config loads defaults and reports missing or bad keys") {
  auto dir = scratch("vtb_unit_config");
  write_json_atomic(dir / "c.json", minimal_config());
  auto c = load_config(dir / "c.json");
  CHECK(c.pipeline.ssim_threshold_T == doctest::Approx(0.85));
  CHECK(c.pipeline.token_budget == 4096);
  CHECK(c.inputs.taxonomy == dir / "taxonomy.json");
  CHECK(c.logical_clock());

  auto expect_key = [&](json j, const std::string& key) {
    write_json_atomic(dir / "c.json", j);
    try {
      load_config(dir / "c.json");
      FAIL("expected a config error for " << key);
    } catch (const ConfigError& e) {
      CHECK(e.key() == key);
    }
  };
  auto j = minimal_config();
  j["inputs"].erase("taxonomy");
  expect_key(j, "inputs.taxonomy");
  j = minimal_config();
  j["pipeline"] = {{"ssim_threshold_T", 1.5}};
  expect_key(j, "pipeline.ssim_threshold_T");
  j = minimal_config();
  j["pipeline"] = {{"packing_strategy", "random"}};
  expect_key(j, "pipeline.packing_strategy");
  j = minimal_config();
  j["services"]["mode"] = "http";
  expect_key(j, "services.base_url");

  write_json_atomic(dir / "c.json", minimal_config());
  auto patched = load_config(dir / "c.json", json{{"pipeline", {{"token_budget", 77}}}});
  CHECK(patched.pipeline.token_budget == 77);
  CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("fixture codes survive a PNG round trip") {
  auto dir = scratch("vtb_unit_code");
  GrayImage g(128, 96, 200);
  for (int x = 0; x < 128; ++x) g.at(x, 50) = 10;
  burn_fixture_code(g, 0x0abc);
  save_png(g, dir / "f.png");
  auto back = load_gray(dir / "f.png");
  CHECK(back == g);
  CHECK(read_fixture_code(back) == std::optional<std::uint16_t>(0x0abc));
  CHECK_FALSE(read_fixture_code(GrayImage(128, 96, 200)).has_value());
  fs::remove_all(dir);
}

TEST_CASE("synthetic video renders deterministically and writes matching audio") {
  auto dir = scratch("vtb_unit_svid");
  SyntheticVideo v;
  v.duration_s = 4;
  v.voiced = {{0.5, 1.5}};
  SyntheticScene s;
  s.end_s = 4;
  s.code = 42;
  s.noise = 3;
  s.reveal = 2;
  v.scenes = {s};
  write_json_atomic(dir / "v.svid.json", synthetic_video_to_json(v));
  SyntheticMedia media;
  CHECK(media.probe_duration(dir / "v.svid.json") == doctest::Approx(4.0));
  auto a = media.frame_at(dir / "v.svid.json", 1.0);
  CHECK(a == v.render(1.0));
  CHECK(read_fixture_code(a) == std::optional<std::uint16_t>(42));
  CHECK_FALSE(a == v.render(3.0));
  VideoMeta meta;
  auto info = media.extract_audio(dir / "v.svid.json", dir / "v.wav");
  CHECK(info.has_audio);
  CHECK(wav_duration(dir / "v.wav") == doctest::Approx(4.0));
  CHECK_THROWS_AS(media.frame_at(dir / "v.svid.json", 9.0), IoError);
  fs::remove_all(dir);
}
