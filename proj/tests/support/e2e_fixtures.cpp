#include "support/e2e_fixtures.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/hash.hpp"
#include "core/json_io.hpp"

namespace vtb::testing {

namespace fs = std::filesystem;

namespace {

struct Line {
  double start, end;
  const char* text;
};

struct VideoSpec {
  std::string id;
  std::string title;
  std::string description;
  std::string language;
  double duration;
  bool audio;
  std::vector<SyntheticScene> scenes;
  std::vector<Line> lines;
};

SyntheticScene scene(double a, double b, const char* kind, int code, int lines, int reveal,
                     const char* diagram) {
  SyntheticScene s;
  s.start_s = a;
  s.end_s = b;
  s.kind = kind;
  s.code = static_cast<std::uint16_t>(code);
  s.seed = static_cast<std::uint64_t>(code) * 31 + 5;
  s.lines = lines;
  s.reveal = reveal;
  s.noise = 2;
  s.diagram = diagram;
  return s;
}

std::vector<VideoSpec> videos() {
  std::vector<VideoSpec> v;
  v.push_back({"geo-lecture-01",
               "Angle sum of a triangle explained",
               "Why the interior angles of a triangle sum to 180 degrees.",
               "en",
               60.0,
               true,
               {scene(0, 15, "slide", 101, 5, 3, "triangle"),
                scene(15, 30, "speaker", 102, 0, 1, "none"),
                scene(30, 45, "speaker", 103, 0, 1, "none"),
                scene(45, 47, "speaker", 105, 0, 1, "none"),
                scene(47, 60, "blackboard", 104, 4, 2, "bars")},
               {{0, 5, "um so today we look at the angle sum of a triangle"},
                {5, 10, "the the three interior angles of any triangle add up to one hundred eighty degrees"},
                {10, 15, "we can see this by drawing a line parallel to one side"},
                {15, 20, "uh the alternate angles formed by the parallel line are equal"},
                {20, 25, "so each interior angle matches one angle along the straight line"},
                {25, 30, "and the angles on a straight line sum to one hundred eighty degrees"},
                {30, 35, "this argument works for every triangle acute right or obtuse"},
                {35, 40, "um it is a classic result from euclidean geometry"},
                {40, 45, "let us now use the angle sum to find a missing angle"},
                {45, 50, "if two angles of a triangle are fifty and seventy degrees"},
                {50, 55, "then the third angle is um sixty degrees"},
                {55, 60, "and the exterior angle equals the sum of the two remote interior angles"}}});
  v.push_back({"pyth-lecture-02",
               "The Pythagorean theorem for right triangles",
               "A short proof and a worked example.",
               "en",
               30.0,
               true,
               {scene(0, 15, "slide", 201, 4, 2, "triangle"),
                scene(15, 30, "slide", 202, 3, 1, "circle")},
               {{0, 5, "the pythagorean theorem relates the three sides of a right triangle"},
                {5, 10, "the square of the hypotenuse equals the sum of the squares of the other two sides"},
                {10, 15, "so a squared plus b squared equals c squared"},
                {15, 20, "for example a three four five triangle satisfies the theorem"},
                {20, 25, "nine plus sixteen equals twenty five which is five squared"},
                {25, 30, "the converse also holds so the theorem tests for right angles"}}});
  v.push_back({"fr-lecture-03",
               "Triangle angle sum (French lecture)",
               "Somme des angles d'un triangle.",
               "fr",
               20.0,
               true,
               {scene(0, 20, "slide", 301, 4, 1, "triangle")},
               {{0, 6, "la somme des angles d'un triangle est toujours egale a cent quatre vingts degres"},
                {6, 13, "on trace une droite parallele a un cote pour le demontrer"},
                {13, 20, "les angles alternes internes sont egaux donc la somme vaut un angle plat"}}});
  v.push_back({"short-04",
               "Angle sum of a triangle in 8 seconds",
               "The fastest triangle fact.",
               "en",
               8.0,
               true,
               {scene(0, 8, "slide", 401, 2, 1, "triangle")},
               {{0, 8, "the angles of a triangle add up to one hundred eighty degrees every single time no exceptions at all"}}});
  v.push_back({"silent-05",
               "Triangle angle sum animation",
               "An animation without narration.",
               "en",
               20.0,
               false,
               {scene(0, 20, "slide", 501, 3, 2, "triangle")},
               {}});
  v.push_back({"filler-06",
               "Pythagorean theorem triangle chat",
               "Talking about the theorem.",
               "en",
               20.0,
               true,
               {scene(0, 20, "speaker", 601, 0, 1, "none")},
               {{0, 7, "um uh so like um you know uh um yeah so um"},
                {7, 14, "like uh um uh right um so uh um okay um uh"},
                {14, 20, "um the theorem uh um yeah uh um like um uh so um"}}});
  v.push_back({"cooking-show-07",
               "Cooking show: perfect pasta",
               "Boil water, add salt, cook pasta.",
               "en",
               30.0,
               true,
               {scene(0, 30, "speaker", 701, 0, 1, "none")},
               {{0, 15, "today we cook pasta in salted boiling water for nine minutes"},
                {15, 30, "then we add the tomato sauce and serve it with fresh basil"}}});
  return v;
}

SyntheticVideo to_synthetic(const VideoSpec& s) {
  SyntheticVideo v;
  v.duration_s = s.duration;
  v.has_audio = s.audio;
  v.scenes = s.scenes;
  for (const auto& l : s.lines) v.voiced.emplace_back(l.start + 0.2, l.end - 0.4);
  return v;
}

std::string audio_hash(const SyntheticVideo& v, const fs::path& scratch) {
  write_wav(scratch, v.audio_samples(), kAudioSampleRate);
  auto h = sha256_file(scratch);
  fs::remove(scratch);
  return h;
}

json score_rule(const char* judge, const char* kind, const char* match, int r, int d, int q) {
  return json{{"judge_id", judge},       {"kind", kind},
              {"match", match},          {"relevance", r},
              {"knowledge_density", d},  {"transcription_quality", q}};
}

}  // namespace

void write_e2e_fixtures(const fs::path& dir) {
  fs::create_directories(dir / "media");
  fs::create_directories(dir / "search");
  fs::create_directories(dir / "services");

  const json taxonomy = {
      {"subjects",
       {{{"name", "Mathematics"},
         {"courses",
          {{{"name", "Geometry"},
            {"sub_courses",
             {{{"name", "Triangles"},
               {"points", {"the angle sum of a triangle", "the Pythagorean theorem"}}}}}},
           {{"name", "Algebra"},
            {"sub_courses",
             {{{"name", "Rational and Irrational Numbers"},
               {"points", {"the definition of Irrational Numbers"}}}}}}}}}}}};
  write_json_atomic(dir / "taxonomy.json", taxonomy);

  json transcripts = json::object();
  std::map<std::string, json> metas;
  std::set<std::string> hashes;
  for (const auto& spec : videos()) {
    auto sv = to_synthetic(spec);
    write_json_atomic(dir / "media" / (spec.id + kSyntheticSuffix), synthetic_video_to_json(sv));
    metas[spec.id] = json{{"video_id", spec.id},
                          {"title", spec.title},
                          {"description", spec.description},
                          {"comments", json::array()},
                          {"duration_s", spec.duration},
                          {"language", spec.language},
                          {"media_ref", "../media/" + spec.id + kSyntheticSuffix}};
    if (!spec.audio) continue;
    json segs = json::array();
    for (const auto& l : spec.lines)
      segs.push_back(json{{"start_s", l.start}, {"end_s", l.end}, {"text", l.text}, {"silent", false}});
    auto h = audio_hash(sv, dir / "scratch.wav");
    if (!hashes.insert(h).second) throw std::runtime_error("two fixture videos share audio " + h);
    transcripts[h] = json{{"language", spec.language}, {"segments", segs}};
  }

  const json index = {
      {"Triangles: the angle sum of a triangle",
       {metas["geo-lecture-01"], metas["cooking-show-07"], metas["fr-lecture-03"],
        metas["short-04"], metas["silent-05"]}},
      {"Triangles: the Pythagorean theorem",
       {metas["pyth-lecture-02"], metas["geo-lecture-01"], metas["filler-06"]}},
      {"Rational and Irrational Numbers: the definition of Irrational Numbers", json::array()}};
  write_json_atomic(dir / "search" / "index.json", index);

  write_json_atomic(dir / "services" / "transcripts.json", transcripts);
  write_json_atomic(dir / "services" / "scores.json",
                    json::array({score_rule("*", "metadata", "Cooking", 1, 3, 3),
                                 score_rule("judge-a", "transcript", "angle sum of a triangle", 5, 4, 5),
                                 score_rule("judge-b", "transcript", "pythagorean theorem relates", 2, 2, 3)}));
  write_json_atomic(
      dir / "services" / "captions.json",
      json{{"code:101", "a slide showing the angle sum of a triangle with a triangle diagram and a parallel line"},
           {"code:102", "a man in a blue shirt talking to the camera in an office"},
           {"code:103", "a person sitting at a desk near a window talking"},
           {"code:104", "a blackboard with the angles of a triangle in degrees and the exterior angle"},
           {"code:105", "a hand covering the camera lens"},
           {"code:201", "a slide about the pythagorean theorem with a right triangle and the squares of its sides"},
           {"code:202", "a slide with a worked example of the theorem three four five squared plus sixteen"},
           {"code:301", "a slide with the angle sum of a triangle written in french"},
           {"code:601", "a person talking to the camera"}});
  write_json_atomic(
      dir / "services" / "ocr.json",
      json{{"code:101", {{"text", "Angle sum of a triangle: A + B + C = 180 degrees"}, {"informativeness", 5}}},
           {"code:102", {{"text", ""}, {"informativeness", 1}}},
           {"code:103", {{"text", ""}, {"informativeness", 1}}},
           {"code:104", {{"text", "Exterior angle = sum of remote interior angles; 50 + 70 + 60 = 180"}, {"informativeness", 4}}},
           {"code:105", {{"text", ""}, {"informativeness", 1}}},
           {"code:201", {{"text", "Pythagorean theorem: a^2 + b^2 = c^2"}, {"informativeness", 5}}},
           {"code:202", {{"text", "3^2 + 4^2 = 9 + 16 = 25 = 5^2"}, {"informativeness", 4}}}});
  write_file_atomic(dir / "services" / "ppl_reference.txt",
                    "the angle sum of a triangle is one hundred eighty degrees\n"
                    "the interior angles of a triangle add up to a straight angle\n"
                    "a line parallel to one side forms alternate angles that are equal\n"
                    "the pythagorean theorem states that the square of the hypotenuse equals the sum of "
                    "the squares of the other two sides of a right triangle\n"
                    "the exterior angle equals the sum of the two remote interior angles\n");

  const json config = {
      {"pipeline",
       {{"token_budget", 160},
        {"max_images_per_sample", 8},
        {"packing_strategy", "concat"},
        {"top_k_search_results", 10}}},
      {"services",
       {{"mode", "mock"},
        {"fixtures_dir", "services"},
        {"judges", {"judge-a", "judge-b"}},
        {"ocr_backends", {"ocr-0"}}}},
      {"inputs", {{"taxonomy", "taxonomy.json"}, {"search_backend", "fixture:search"}}},
      {"runtime", {{"workers", 2}, {"seed", 7}}}};
  write_json_atomic(dir / "config.json", config);
}

std::vector<SyntheticVideo> noisy_slide_videos() {
  std::vector<SyntheticVideo> out;
  for (int k = 0; k < 10; ++k) {
    SyntheticVideo v;
    v.duration_s = 30.0;
    v.has_audio = false;
    const char* diagrams[] = {"triangle", "circle", "bars", "none"};
    for (int i = 0; i < 2; ++i) {
      SyntheticScene s;
      s.start_s = 15.0 * i;
      s.end_s = 15.0 * (i + 1);
      s.kind = (k + i) % 3 == 2 ? "blackboard" : "slide";
      s.seed = static_cast<std::uint64_t>(1000 + 17 * k + i);
      s.lines = 4 + (k + i) % 3;
      s.reveal = 2 + (k % 2);
      s.noise = 3;
      s.flicker = 6;
      s.diagram = diagrams[(k + i) % 4];
      v.scenes.push_back(s);
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace vtb::testing
