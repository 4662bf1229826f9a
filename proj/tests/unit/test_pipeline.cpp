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

#include <atomic>
#include <filesystem>

#include "core/config.hpp"
#include "core/error.hpp"
#include "core/json_io.hpp"
#include "core/mock_services.hpp"
#include "core/pipeline.hpp"
#include "support/e2e_fixtures.hpp"

using namespace vtb;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = VTB_FIXTURES_DIR;

fs::path fresh_workdir(const char* name) {
  auto d = fs::temp_directory_path() / name;
  fs::remove_all(d);
  return d;
}

// Mock services with switchable outages.
class FlakyServices final : public Services {
 public:
  explicit FlakyServices(const fs::path& fixtures) : inner_(fixtures) {}
  std::atomic<bool> caption_down{false};
  std::atomic<bool> judge_b_down{false};

  Transcription transcribe(const fs::path& a) override { return inner_.transcribe(a); }
  std::string refine_text(std::string_view t) override { return inner_.refine_text(t); }
  CriteriaScores score(std::string_view t, const KnowledgePoint& p, const std::string& j,
                       ScoreKind k) override {
    if (judge_b_down && j == "judge-b") throw TransportError("judge-b unreachable");
    return inner_.score(t, p, j, k);
  }
  std::string caption_clip(const std::vector<fs::path>& f) override {
    if (caption_down) throw TransportError("captioner unreachable");
    return inner_.caption_clip(f);
  }
  std::vector<EmbeddingVector> embed_texts(const std::vector<std::string>& t) override {
    return inner_.embed_texts(t);
  }
  std::vector<EmbeddingVector> embed_images(const std::vector<fs::path>& i) override {
    return inner_.embed_images(i);
  }
  OcrResult ocr_frame(const fs::path& i, const std::string& b) override { return inner_.ocr_frame(i, b); }
  double perplexity(std::string_view t) override { return inner_.perplexity(t); }

 private:
  MockServices inner_;
};

const StageReport& find(const std::vector<StageReport>& rs, const std::string& stage) {
  for (const auto& r : rs)
    if (r.stage == stage) return r;
  throw std::runtime_error("no report for " + stage);
}

}  // namespace

TEST_CASE("fixture generator reproduces the committed fixtures") {
  auto dir = fresh_workdir("vtb_unit_regen");
  testing::write_e2e_fixtures(dir);
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), dir);
    CAPTURE(rel.string());
    REQUIRE(fs::exists(kFixtures / rel));
    CHECK(read_text_file(e.path()) == read_text_file(kFixtures / rel));
  }
  fs::remove_all(dir);
}

TEST_CASE("end-to-end run reproduces the golden corpus and resumes idempotently") {
  auto wd = fresh_workdir("vtb_unit_e2e");
  Pipeline p(load_config(kFixtures / "config.json"), wd);
  auto first = p.run("all");
  for (const auto& r : first) CHECK(r.ok());
  CHECK(read_text_file(wd / "corpus.jsonl") == read_text_file(kFixtures / "golden" / "corpus.jsonl"));
  CHECK(find(first, "video").dropped == 4);

  auto second = p.run("all");
  for (const auto& r : second) {
    CAPTURE(r.stage);
    CHECK(r.items == r.skipped);
  }
  CHECK(read_text_file(wd / "corpus.jsonl") == read_text_file(kFixtures / "golden" / "corpus.jsonl"));
  fs::remove_all(wd);
}

TEST_CASE("outages leave items pending and a later run completes them") {
  auto wd = fresh_workdir("vtb_unit_outage");
  auto services = std::make_shared<FlakyServices>(kFixtures / "services");
  services->caption_down = true;
  services->judge_b_down = true;
  Pipeline p(load_config(kFixtures / "config.json"), wd, {}, services);
  auto rs = p.run("all");
  CHECK(find(rs, "clip").pending == 2);
  CHECK(find(rs, "clip").kept == 0);
  // judge-a alone still decides the filler video.
  CHECK(find(rs, "video").dropped == 4);
  std::size_t pending_lines = 0;
  for_each_line(wd / "pending" / "clip.jsonl", [&](std::string_view, std::size_t) { ++pending_lines; });
  CHECK(pending_lines == 2);

  services->caption_down = false;
  services->judge_b_down = false;
  rs = p.run("all");
  CHECK(find(rs, "clip").kept == 2);
  CHECK(find(rs, "clip").pending == 0);
  CHECK(read_text_file(wd / "corpus.jsonl") == read_text_file(kFixtures / "golden" / "corpus.jsonl"));
  fs::remove_all(wd);
}

TEST_CASE("a single configured judge decides alone") {
  auto wd = fresh_workdir("vtb_unit_one_judge");
  PipelineOptions o;
  o.judges = 1;
  Pipeline p(load_config(kFixtures / "config.json"), wd, o);
  p.run("collect");
  auto r = p.run_stage("video");
  CHECK(r.kept == 2);
  auto v = read_json_file(wd / "video" / "pyth-lecture-02.json");
  CHECK(v["verdict"]["judge_results"].size() == 1);
  fs::remove_all(wd);
}

TEST_CASE("stages refuse to run before their inputs exist") {
  auto wd = fresh_workdir("vtb_unit_order");
  Pipeline p(load_config(kFixtures / "config.json"), wd);
  CHECK_THROWS_AS(p.run_stage("clip"), StageError);
  CHECK_THROWS_AS(p.run("nonsense"), ArgumentError);
  fs::remove_all(wd);
}

TEST_CASE("doctor in mock mode") {
  auto wd = fresh_workdir("vtb_unit_doctor");
  Pipeline p(load_config(kFixtures / "config.json"), wd);
  auto d = p.doctor();
  CHECK(d["ok"] == true);
  fs::remove_all(wd);
}
