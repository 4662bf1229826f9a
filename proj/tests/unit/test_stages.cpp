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

#include "core/clip_stage.hpp"
#include "core/collection.hpp"
#include "core/error.hpp"
#include "core/frame_stage.hpp"
#include "core/mock_services.hpp"
#include "core/video_stage.hpp"
#include "support/fake_services.hpp"

using namespace vtb;
using vtb::testing::FakeServices;

namespace {

std::vector<AsrSegment> segs(std::initializer_list<std::pair<double, double>> spans) {
  std::vector<AsrSegment> out;
  int i = 0;
  for (auto [a, b] : spans) out.push_back({a, b, "s" + std::to_string(i++), false});
  return out;
}

std::vector<std::pair<double, double>> spans(const std::vector<AsrSegment>& p) {
  std::vector<std::pair<double, double>> out;
  for (const auto& s : p) out.emplace_back(s.start_s, s.end_s);
  return out;
}

using Spans = std::vector<std::pair<double, double>>;

CriteriaScores scores(int r, int d, int q) {
  CriteriaScores s;
  s.relevance = r;
  s.knowledge_density = d;
  s.transcription_quality = q;
  return s;
}

}  // namespace

TEST_CASE("merge closes a paragraph once it reaches the target") {
  PipelineConfig cfg;
  auto p = merge_segments(segs({{0, 4}, {4, 9}, {9, 15}}), cfg);
  CHECK(spans(p) == Spans{{0, 15}});
  CHECK(p[0].text == "s0 s1 s2");
}

TEST_CASE("merge folds a short tail into its predecessor when it fits") {
  PipelineConfig cfg;
  CHECK(spans(merge_segments(segs({{0, 18}, {18, 19}}), cfg)) == Spans{{0, 19}});
  CHECK(spans(merge_segments(segs({{0, 18}, {18, 21}}), cfg)) == Spans{{0, 18}, {18, 21}});
}

TEST_CASE("merge keeps an overlong single segment as is") {
  PipelineConfig cfg;
  CHECK(spans(merge_segments(segs({{0, 25}}), cfg)) == Spans{{0, 25}});
}

TEST_CASE("merge closes before a segment that would exceed the maximum") {
  PipelineConfig cfg;
  CHECK(spans(merge_segments(segs({{0, 8}, {8, 30}, {30, 40}, {40, 52}}), cfg)) ==
        Spans{{0, 8}, {8, 30}, {30, 40}, {40, 52}});
}

TEST_CASE("merge rejects overlapping or empty segments") {
  PipelineConfig cfg;
  CHECK_THROWS_AS(merge_segments(segs({{0, 5}, {4, 9}}), cfg), ValidationError);
  CHECK_THROWS_AS(merge_segments(segs({{3, 3}}), cfg), ValidationError);
  CHECK(merge_segments({}, cfg).empty());
}

TEST_CASE("cut_clips names clips and checks the video length") {
  auto clips = cut_clips("vid", 30.0, segs({{0, 15}, {15, 30}}));
  REQUIRE(clips.size() == 2);
  CHECK(clips[0].clip_id == "vid_c000");
  CHECK(clips[1].clip_id == "vid_c001");
  CHECK(clips[1].asr_text == "s1");
  CHECK_THROWS_AS(cut_clips("vid", 20.0, segs({{0, 15}, {15, 30}})), ValidationError);
}

TEST_CASE("caption frames sit at sub-span centres") {
  VideoClip c;
  c.start_s = 10;
  c.end_s = 18;
  auto t = caption_frame_times(c, 4);
  REQUIRE(t.size() == 4);
  CHECK(t[0] == doctest::Approx(11));
  CHECK(t[3] == doctest::Approx(17));
}

TEST_CASE("visual filter keeps, drops and defers") {
  FakeServices s;
  s.on_caption = [](const auto&) { return std::string("a slide about triangles"); };
  s.on_embed_texts = [](const std::vector<std::string>& t) {
    std::vector<EmbeddingVector> out;
    for (const auto& x : t) out.push_back(MockServices::embed_text(x));
    return out;
  };
  VideoClip c;
  c.asr_text = "triangles have three sides";
  auto kept = visual_filter(c, {"f.png"}, s, 0.3);
  CHECK(kept.status == ClipStatus::kept);
  CHECK(*kept.caption_asr_similarity > 0.3);

  c.asr_text = "cooking pasta with basil";
  CHECK(visual_filter(c, {"f.png"}, s, 0.3).status == ClipStatus::dropped_visual);

  c.asr_text.clear();
  CHECK(visual_filter(c, {"f.png"}, s, 0.3).status == ClipStatus::dropped_visual);

  s.on_caption = [](const auto&) -> std::string { throw TransportError("down"); };
  c.asr_text = "triangles";
  CHECK(visual_filter(c, {"f.png"}, s, 0.3).status == ClipStatus::pending);
}

TEST_CASE("rule filter checks duration, tokens, then language") {
  PipelineConfig cfg;
  VideoMeta m;
  m.duration_s = 60;
  Transcription t;
  t.language = "en";
  std::string long_text;
  for (int i = 0; i < 25; ++i) long_text += "word ";
  t.segments = {{0, 10, long_text, false}};
  CHECK(rule_filter(m, t, cfg).pass);

  m.duration_s = 5;
  t.language = "fr";
  CHECK(rule_filter(m, t, cfg).reason == "too_short");
  m.duration_s = 60;
  CHECK(rule_filter(m, t, cfg).reason == "non_english");
  t.segments = {{0, 10, "too few words", false}};
  CHECK(rule_filter(m, t, cfg).reason == "too_few_tokens");
}

TEST_CASE("english language tags") {
  CHECK(is_english("en"));
  CHECK(is_english("EN-us"));
  CHECK(is_english("en_GB"));
  CHECK(is_english("English"));
  CHECK_FALSE(is_english("fr"));
  CHECK_FALSE(is_english("eng"));
  CHECK_FALSE(is_english("unknown"));
}

TEST_CASE("two judges drop a video only when both fail") {
  KnowledgePoint kp{"S", "C", "SC", "P"};
  for (bool a_pass : {false, true}) {
    for (bool b_pass : {false, true}) {
      FakeServices s;
      s.on_score = [&](std::string_view, const KnowledgePoint&, const std::string& id, ScoreKind) {
        const bool pass = id == "a" ? a_pass : b_pass;
        return pass ? scores(5, 4, 5) : scores(2, 2, 3);
      };
      auto v = judge_filter("v", "text", kp, s, {"a", "b"}, 3);
      const bool dropped = v.final == VideoVerdict::Final::dropped;
      CAPTURE(a_pass);
      CAPTURE(b_pass);
      CHECK(dropped == (!a_pass && !b_pass));
    }
  }
}

TEST_CASE("unreachable judges are ignored and all unreachable is pending") {
  KnowledgePoint kp{"S", "C", "SC", "P"};
  FakeServices s;
  s.on_score = [](std::string_view, const KnowledgePoint&, const std::string& id,
                  ScoreKind) -> CriteriaScores {
    if (id == "b") throw TransportError("judge b down");
    return scores(1, 1, 1);
  };
  auto v = judge_filter("v", "text", kp, s, {"a", "b"}, 3);
  CHECK(v.final == VideoVerdict::Final::dropped);
  CHECK_FALSE(v.judge_results[1].reachable);

  s.on_score = [](std::string_view, const KnowledgePoint&, const std::string&,
                  ScoreKind) -> CriteriaScores { throw TransportError("down"); };
  CHECK(judge_filter("v", "text", kp, s, {"a", "b"}, 3).final == VideoVerdict::Final::pending);
}

TEST_CASE("the mock refiner strips fillers and stutters") {
  MockServices s;
  CHECK(s.refine_text("um so the the angle is um ninety") == "so the angle is ninety");
}

TEST_CASE("refine keeps raw text for failed segments") {
  FakeServices s;
  s.on_refine = [](std::string_view t) -> std::string {
    if (t == "bad") throw TransportError("refiner down");
    return "clean";
  };
  Transcription raw;
  raw.language = "en";
  raw.segments = {{0, 5, "um good", false}, {5, 10, "bad", false}, {10, 12, "", true}};
  auto r = refine_transcript("v", raw, s, nullptr);
  REQUIRE(r.refined_paragraphs.size() == 3);
  CHECK(r.refined_paragraphs[0].text == "clean");
  CHECK(r.refined_paragraphs[1].text == "bad");
  CHECK(r.refined_paragraphs[2].text.empty());
  CHECK(r.refine_failures == std::vector<std::size_t>{1});
}

TEST_CASE("unigram perplexity is lower for refined text") {
  MockServices s;
  Transcription raw;
  raw.segments = {{0, 5, "um so uh the the angle sum of a triangle is um one hundred eighty degrees", false}};
  auto r = refine_transcript("v", raw, s, &s);
  REQUIRE(r.ppl_raw.has_value());
  CHECK(*r.ppl_refined <= *r.ppl_raw);
}

TEST_CASE("unigram model identities") {
  auto m = UnigramModel::fit("a a b", 1.0);
  // Add-one smoothing over {a, b} plus one unseen slot.
  CHECK(m.probability("a") == doctest::Approx(3.0 / 6.0));
  CHECK(m.probability("b") == doctest::Approx(2.0 / 6.0));
  CHECK(m.probability("zzz") == doctest::Approx(1.0 / 6.0));
  CHECK(m.perplexity("a") == doctest::Approx(2.0));
  CHECK(m.perplexity("a b") == doctest::Approx(std::sqrt(1.0 / (0.5 * (2.0 / 6.0)))));
}

TEST_CASE("ocr falls back across backends and keeps frames when all fail") {
  FakeServices s;
  s.on_ocr = [](const std::filesystem::path& p, const std::string& backend) -> OcrResult {
    if (backend == "primary") throw TransportError("primary down");
    if (p == "blank.png") return {"", 1};
    return {"angle sum", 4};
  };
  std::vector<Keyframe> kfs(2);
  kfs[0].image_ref = "slide.png";
  kfs[1].image_ref = "blank.png";
  auto r = ocr_and_filter(kfs, s, {"primary", "secondary"}, 3);
  REQUIRE(r.kept.size() == 1);
  CHECK(*r.kept[0].ocr_text == "angle sum");
  REQUIRE(r.dropped.size() == 1);
  CHECK(*r.dropped[0].score == 1);

  s.on_ocr = [](const std::filesystem::path&, const std::string&) -> OcrResult {
    throw ProtocolError("bad payload");
  };
  auto all_failed = ocr_and_filter(kfs, s, {"primary"}, 3);
  CHECK(all_failed.kept.size() == 2);
  CHECK(all_failed.kept[0].ocr_failed);
  CHECK_FALSE(all_failed.kept[0].score.has_value());
}

TEST_CASE("ocr dedup keeps the first of near-identical texts") {
  std::vector<Keyframe> kfs(4);
  kfs[0].ocr_text = "the angle sum is 180 degrees";
  kfs[1].ocr_text = "The angle sum is 180 degrees!";
  kfs[2].ocr_text = "";
  kfs[3].ocr_text = "pythagorean theorem";
  dedup_ocr(kfs, 0.8);
  CHECK(kfs[0].ocr_kept);
  CHECK_FALSE(kfs[1].ocr_kept);
  CHECK_FALSE(kfs[2].ocr_kept);
  CHECK(kfs[3].ocr_kept);
}

TEST_CASE("taxonomy parsing and query expansion") {
  json j = {{"subjects",
             {{{"name", "Math"},
               {"courses",
                {{{"name", "Algebra"},
                  {"sub_courses",
                   {{{"name", "Rational and Irrational Numbers"},
                     {"points", {"the definition of Irrational Numbers", "density"}}}}}}}}}}}};
  auto t = taxonomy_from_json(j);
  auto pts = t.points();
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].id() == "Math/Algebra/Rational and Irrational Numbers/the definition of Irrational Numbers");
  auto q = expand_queries(t);
  CHECK(q[0].query == "Rational and Irrational Numbers: the definition of Irrational Numbers");
  CHECK(t.course_count() == 1);
  CHECK(taxonomy_from_json(taxonomy_to_json(t)).points() == pts);

  json missing = {{"subjects", {{{"name", "Math"}}}}};
  CHECK_THROWS_AS(taxonomy_from_json(missing), ValidationError);
}

TEST_CASE("dedup keeps the first occurrence of each video id") {
  std::vector<SearchResult> r(3);
  r[0].meta.video_id = "x";
  r[0].point_id = "p1";
  r[1].meta.video_id = "y";
  r[2].meta.video_id = "x";
  r[2].point_id = "p2";
  std::vector<SearchResult> dropped;
  auto kept = dedup_by_video_id(r, &dropped);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].point_id == "p1");
  REQUIRE(dropped.size() == 1);
  CHECK(dropped[0].point_id == "p2");
}

TEST_CASE("metadata review keeps, drops on flags or low relevance, defers on outage") {
  KnowledgePoint kp{"Math", "Geometry", "Triangles", "the angle sum of a triangle"};
  VideoMeta m;
  m.video_id = "v";
  m.title = "Triangle angle sum";
  FakeServices s;
  s.on_score = [](std::string_view, const KnowledgePoint&, const std::string&, ScoreKind k) {
    CHECK(k == ScoreKind::metadata);
    return scores(4, 3, 3);
  };
  CHECK(filter_metadata(m, kp, s, "j", 3).kind == MetadataDecision::Kind::keep);

  s.on_score = [](std::string_view, const KnowledgePoint&, const std::string&, ScoreKind) {
    return scores(2, 5, 5);
  };
  auto d = filter_metadata(m, kp, s, "j", 3);
  CHECK(d.kind == MetadataDecision::Kind::drop);
  CHECK(d.reason == "irrelevant");

  s.on_score = [](std::string_view, const KnowledgePoint&, const std::string&, ScoreKind) {
    auto x = scores(5, 5, 5);
    x.flag = "inappropriate";
    return x;
  };
  CHECK(filter_metadata(m, kp, s, "j", 3).reason == "inappropriate");

  s.on_score = [](std::string_view, const KnowledgePoint&, const std::string&,
                  ScoreKind) -> CriteriaScores { throw TransportError("down"); };
  CHECK(filter_metadata(m, kp, s, "j", 3).kind == MetadataDecision::Kind::pending);
}
