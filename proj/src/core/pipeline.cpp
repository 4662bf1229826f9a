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

#include "core/pipeline.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <thread>

#include "core/assembler.hpp"
#include "core/clip_stage.hpp"
#include "core/collection.hpp"
#include "core/error.hpp"
#include "core/frame_stage.hpp"
#include "core/hash.hpp"
#include "core/http_services.hpp"
#include "core/keyframes.hpp"
#include "core/manifest.hpp"
#include "core/metrics.hpp"
#include "core/mock_services.hpp"
#include "core/video_stage.hpp"

namespace vtb {

namespace fs = std::filesystem;

json report_to_json(const StageReport& r) {
  return json{{"stage", r.stage},       {"ok", r.ok()},
              {"items", r.items},       {"skipped", r.skipped},
              {"kept", r.kept},         {"dropped", r.dropped},
              {"pending", r.pending},   {"failed", r.failed},
              {"failed_keys", r.failed_keys}, {"pending_keys", r.pending_keys},
              {"summary", r.summary}};
}

std::shared_ptr<Services> make_services(const AppConfig& cfg) {
  if (cfg.services.mode == "mock") return std::make_shared<MockServices>(cfg.services.fixtures_dir);
  HttpServices::Options o;
  o.base_url = cfg.services.base_url;
  o.token = cfg.services.token;
  o.max_in_flight = cfg.services.max_in_flight;
  o.retry.attempts = cfg.services.retry_attempts;
  o.retry.base_delay = std::chrono::milliseconds(cfg.services.retry_base_ms);
  o.timeout_s = cfg.services.timeout_s;
  return std::make_shared<HttpServices>(o);
}

namespace {

struct ItemOutcome {
  enum class Kind { kept, dropped, pending, failed } kind = Kind::kept;
  std::vector<std::string> outputs;
  std::string reason;
  json extra = json::object();
};

struct WorkItem {
  std::string key;
  std::string hash;
  std::function<ItemOutcome()> compute;  // empty for items decided up front
  std::optional<ItemOutcome> decided;
};

ItemOutcome kept(std::vector<std::string> outputs, json extra = json::object()) {
  return {ItemOutcome::Kind::kept, std::move(outputs), {}, std::move(extra)};
}
ItemOutcome dropped(std::string reason, json extra = json::object()) {
  return {ItemOutcome::Kind::dropped, {}, std::move(reason), std::move(extra)};
}
ItemOutcome pending(std::string reason) { return {ItemOutcome::Kind::pending, {}, std::move(reason), {}}; }

const char* kind_name(ItemOutcome::Kind k) {
  switch (k) {
    case ItemOutcome::Kind::kept: return "kept";
    case ItemOutcome::Kind::dropped: return "dropped";
    case ItemOutcome::Kind::pending: return "pending";
    case ItemOutcome::Kind::failed: return "failed";
  }
  return "failed";
}

std::string hash_of(std::initializer_list<std::string_view> parts) {
  Sha256 h;
  for (auto p : parts) {
    h.update(std::to_string(p.size()));
    h.update(":");
    h.update(p);
  }
  return h.hex();
}

std::optional<std::pair<std::string, std::size_t>> crash_point() {
  const char* env = std::getenv("VTB_CRASH_AFTER");
  if (!env || !*env) return std::nullopt;
  std::string s(env);
  auto colon = s.find(':');
  if (colon == std::string::npos) return std::nullopt;
  try {
    return std::make_pair(s.substr(0, colon), static_cast<std::size_t>(std::stoul(s.substr(colon + 1))));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::string clip_frame_name(std::size_t k) { return std::to_string(k) + ".png"; }

}  // namespace

struct Pipeline::Impl {
  Pipeline& p;
  explicit Impl(Pipeline& owner) : p(owner) {}

  fs::path wd(const std::string& rel) const { return p.workdir_ / rel; }

  // Creates the file so downstream stages see an empty input rather than a missing one.
  Manifest manifest(const std::string& stage) const {
    const auto path = wd("manifests/" + stage + ".jsonl");
    if (!fs::exists(path)) {
      fs::create_directories(path.parent_path());
      std::ofstream(path, std::ios::app | std::ios::binary);
    }
    return Manifest(path, stage, p.cfg_.logical_clock());
  }

  std::vector<ManifestEntry> upstream(const std::string& prev) const {
    auto path = p.opts_.upstream_manifest ? *p.opts_.upstream_manifest
                                          : wd("manifests/" + prev + ".jsonl");
    if (!fs::exists(path))
      throw StageError("upstream manifest " + path.string() + " not found; run '" + prev + "' first");
    std::vector<ManifestEntry> out;
    for (auto& e : Manifest(path, prev, p.cfg_.logical_clock()).entries())
      if (!e.drop_reason) out.push_back(std::move(e));
    return out;
  }

  void append_log(const std::string& stage, const json& line) {
    fs::create_directories(wd("logs"));
    std::ofstream out(wd("logs/" + stage + ".jsonl"), std::ios::app | std::ios::binary);
    out << dump_line(line) << '\n';
  }

  // Rebuilds <stage>/drops.jsonl from the manifest so it is identical however
  // the stage was interrupted and resumed.
  void write_drops(const std::string& stage, const Manifest& m) {
    std::string body;
    for (const auto& e : m.entries()) {
      if (e.drop_reason) {
        json d{{"input_key", e.input_key}, {"reason", *e.drop_reason}};
        if (e.extra.contains("detail")) d["detail"] = e.extra["detail"];
        body += dump_line(d) + "\n";
      }
      if (auto it = e.extra.find("drops"); it != e.extra.end()) {
        for (const auto& d : *it) {
          json rec{{"input_key", e.input_key}};
          for (const auto& [k, v] : d.items()) rec[k] = v;
          body += dump_line(rec) + "\n";
        }
      }
    }
    fs::create_directories(wd(stage));
    write_file_atomic(wd(stage + "/drops.jsonl"), body);
  }

  StageReport run_items(const std::string& stage, std::vector<WorkItem> items, Manifest& m) {
    StageReport rep;
    rep.stage = stage;
    rep.items = items.size();

    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (m.is_complete(items[i].key, items[i].hash)) {
        ++rep.skipped;
        append_log(stage, json{{"stage", stage}, {"item", items[i].key}, {"status", "skipped"}});
      } else {
        todo.push_back(i);
      }
    }

    std::vector<std::optional<ItemOutcome>> results(todo.size());
    std::mutex mu;
    std::condition_variable cv;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t slot = next.fetch_add(1);
        if (slot >= todo.size()) return;
        auto& item = items[todo[slot]];
        ItemOutcome out;
        if (item.decided) {
          out = *item.decided;
        } else {
          try {
            out = item.compute();
          } catch (const TransportError& e) {
            out = pending(e.what());
          } catch (const std::exception& e) {
            out = {ItemOutcome::Kind::failed, {}, e.what(), {}};
          }
        }
        std::lock_guard lock(mu);
        results[slot] = std::move(out);
        cv.notify_all();
      }
    };
    const auto n_workers = std::max<std::size_t>(
        1, std::min<std::size_t>(static_cast<std::size_t>(p.cfg_.worker_count()), todo.size()));
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < n_workers && !todo.empty(); ++i) pool.emplace_back(worker);

    const auto crash = crash_point();
    std::size_t commits = 0;
    json pending_lines = json::array();
    for (std::size_t slot = 0; slot < todo.size(); ++slot) {
      ItemOutcome out;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return results[slot].has_value(); });
        out = std::move(*results[slot]);
      }
      const auto& item = items[todo[slot]];
      json log{{"stage", stage}, {"item", item.key}, {"status", kind_name(out.kind)}};
      if (!out.reason.empty()) log["reason"] = out.reason;

      if (out.kind == ItemOutcome::Kind::kept || out.kind == ItemOutcome::Kind::dropped) {
        if (crash && crash->first == stage && commits == crash->second) {
          std::fflush(nullptr);
          std::_Exit(137);
        }
        ManifestEntry e;
        e.input_key = item.key;
        e.input_hash = item.hash;
        e.output_keys = out.outputs;
        if (out.kind == ItemOutcome::Kind::dropped) e.drop_reason = out.reason;
        e.extra = out.extra;
        m.commit(std::move(e));
        ++commits;
        ++(out.kind == ItemOutcome::Kind::kept ? rep.kept : rep.dropped);
      } else if (out.kind == ItemOutcome::Kind::pending) {
        ++rep.pending;
        rep.pending_keys.push_back(item.key);
        pending_lines.push_back(json{{"input_key", item.key}, {"reason", out.reason}});
      } else {
        ++rep.failed;
        rep.failed_keys.push_back(item.key);
      }
      append_log(stage, log);
    }
    for (auto& t : pool) t.join();

    std::string body;
    for (const auto& l : pending_lines) body += dump_line(l) + "\n";
    fs::create_directories(wd("pending"));
    write_file_atomic(wd("pending/" + stage + ".jsonl"), body);
    write_drops(stage, m);
    return rep;
  }

  std::string cfg_hash(const json& subset) const { return sha256_hex(subset.dump()); }

  // --- collect -------------------------------------------------------------

  StageReport collect() {
    const auto& pc = p.cfg_.pipeline;
    auto taxonomy = load_taxonomy(p.cfg_.inputs.taxonomy);
    std::map<std::string, KnowledgePoint> points;
    for (const auto& kp : taxonomy.points()) points[kp.id()] = kp;
    auto backend = make_search_backend(p.cfg_.inputs.search_backend);
    auto results = collect_results(*backend, expand_queries(taxonomy), pc.top_k_search_results);

    const auto judge = p.cfg_.services.metadata_judge;
    const auto settings = cfg_hash(json{{"judge", judge}, {"threshold", pc.criteria_pass_threshold}});
    std::vector<WorkItem> items;
    std::map<std::string, std::size_t> seen;
    for (const auto& r : results) {
      const auto meta_json = json(r.meta).dump();
      if (seen.count(r.meta.video_id)) {
        WorkItem w;
        w.key = "dup:" + r.point_id + ":" + std::to_string(r.rank) + ":" + r.meta.video_id;
        w.hash = hash_of({meta_json});
        w.decided = dropped("duplicate", json{{"detail", "video id already collected"}});
        items.push_back(std::move(w));
        continue;
      }
      seen[r.meta.video_id] = items.size();
      WorkItem w;
      w.key = r.meta.video_id;
      w.hash = hash_of({meta_json, r.point_id, settings});
      w.compute = [this, r, kp = points.at(r.point_id), judge, thr = pc.criteria_pass_threshold] {
        auto d = filter_metadata(r.meta, kp, *p.services_, judge, thr);
        if (d.kind == MetadataDecision::Kind::pending) return pending(d.reason);
        if (d.kind == MetadataDecision::Kind::drop) return dropped("metadata:" + d.reason);
        const std::string rel = "collect/" + r.meta.video_id + ".json";
        fs::create_directories(wd("collect"));
        write_json_atomic(wd(rel), json{{"meta", r.meta}, {"point", kp}, {"rank", r.rank}});
        return kept({rel});
      };
      items.push_back(std::move(w));
    }
    auto m = manifest("collect");
    auto rep = run_items("collect", std::move(items), m);
    rep.summary = json{{"points", points.size()}, {"search_results", results.size()}};
    return rep;
  }

  // --- video ---------------------------------------------------------------

  StageReport video() {
    const auto& pc = p.cfg_.pipeline;
    auto judges = p.cfg_.services.judges;
    if (p.opts_.judges) {
      if (*p.opts_.judges == 0 || *p.opts_.judges > judges.size())
        throw ConfigError("services.judges", "--judges " + std::to_string(*p.opts_.judges) +
                                                 " but " + std::to_string(judges.size()) +
                                                 " judges are configured");
      judges.resize(*p.opts_.judges);
    }
    const auto settings = cfg_hash(json{{"min_duration_s", pc.min_duration_s},
                                        {"min_asr_tokens", pc.min_asr_tokens},
                                        {"threshold", pc.criteria_pass_threshold},
                                        {"judges", judges}});
    std::vector<WorkItem> items;
    for (const auto& e : upstream("collect")) {
      WorkItem w;
      w.key = e.input_key;
      const auto src = wd(e.output_keys.at(0));
      w.hash = hash_of({read_text_file(src), settings});
      w.compute = [this, src, judges, &pc] { return video_item(src, judges, pc); };
      items.push_back(std::move(w));
    }
    auto m = manifest("video");
    return run_items("video", std::move(items), m);
  }

  ItemOutcome video_item(const fs::path& src, const std::vector<std::string>& judges,
                         const PipelineConfig& pc) {
    auto in = read_json_file(src);
    auto meta = in.at("meta").get<VideoMeta>();
    auto point = in.at("point").get<KnowledgePoint>();
    meta.duration_s = p.media_->probe_duration(meta.media_ref);

    const std::string audio_rel = "audio/" + meta.video_id + ".wav";
    auto audio = extract_audio(*p.media_, meta, wd("audio"));
    Transcription raw;
    if (audio.has_audio) raw = p.services_->transcribe(audio.path);

    VideoVerdict verdict;
    verdict.video_id = meta.video_id;
    verdict.rule_result = rule_filter(meta, raw, pc);
    if (!verdict.rule_result.pass) {
      verdict.final = VideoVerdict::Final::dropped;
      verdict.reason = verdict.rule_result.reason;
      return dropped("rule:" + verdict.rule_result.reason, json{{"detail", verdict_to_json(verdict)}});
    }
    verdict = judge_filter(meta.video_id, transcript_text(raw.segments), point, *p.services_, judges,
                           pc.criteria_pass_threshold);
    if (verdict.final == VideoVerdict::Final::pending) return pending(verdict.reason);
    if (verdict.final == VideoVerdict::Final::dropped)
      return dropped("judges:" + verdict.reason, json{{"detail", verdict_to_json(verdict)}});

    auto refined = refine_transcript(meta.video_id, raw, *p.services_, p.services_.get());
    const std::string rel = "video/" + meta.video_id + ".json";
    fs::create_directories(wd("video"));
    write_json_atomic(wd(rel), json{{"meta", meta},
                                    {"point", point},
                                    {"verdict", verdict_to_json(verdict)},
                                    {"transcript", refined}});
    json extra{{"refine_failures", refined.refine_failures}};
    if (refined.ppl_raw) extra["ppl_raw"] = *refined.ppl_raw;
    if (refined.ppl_refined) extra["ppl_refined"] = *refined.ppl_refined;
    std::vector<std::string> outputs;
    if (audio.has_audio) outputs.push_back(audio_rel);
    outputs.push_back(rel);
    return kept(outputs, extra);
  }

  // --- clip ----------------------------------------------------------------

  StageReport clip() {
    const auto& pc = p.cfg_.pipeline;
    const auto settings = cfg_hash(json{{"target", pc.clip_target_s},
                                        {"min", pc.clip_min_s},
                                        {"max", pc.clip_max_s},
                                        {"threshold", pc.caption_asr_sim_threshold},
                                        {"caption_frames", pc.caption_frames},
                                        {"use_refined_asr", pc.use_refined_asr}});
    std::vector<WorkItem> items;
    for (const auto& e : upstream("video")) {
      WorkItem w;
      w.key = e.input_key;
      const auto src = wd(e.output_keys.back());
      w.hash = hash_of({read_text_file(src), settings});
      w.compute = [this, src, &pc] { return clip_item(src, pc); };
      items.push_back(std::move(w));
    }
    auto m = manifest("clip");
    return run_items("clip", std::move(items), m);
  }

  ItemOutcome clip_item(const fs::path& src, const PipelineConfig& pc) {
    auto in = read_json_file(src);
    auto meta = in.at("meta").get<VideoMeta>();
    auto transcript = in.at("transcript").get<RefinedTranscript>();
    const auto& segs = pc.use_refined_asr ? transcript.refined_paragraphs : transcript.raw_segments;
    auto clips = cut_clips(meta.video_id, meta.duration_s, merge_segments(segs, pc));

    json drops = json::array();
    std::size_t n_kept = 0;
    for (auto& c : clips) {
      std::vector<fs::path> frames;
      const std::string dir = "clip/frames/" + meta.video_id + "/" + c.clip_id;
      fs::create_directories(wd(dir));
      std::size_t k = 0;
      try {
        for (double t : caption_frame_times(c, pc.caption_frames)) {
          auto path = wd(dir + "/" + clip_frame_name(k++));
          save_png(p.media_->frame_at(meta.media_ref, t), path);
          frames.push_back(path);
        }
      } catch (const IoError& e) {
        return pending(std::string("frame decode: ") + e.what());
      }
      c = visual_filter(std::move(c), frames, *p.services_, pc.caption_asr_sim_threshold);
      if (c.status == ClipStatus::pending) return pending("captioner unavailable for " + c.clip_id);
      if (c.status == ClipStatus::kept) {
        ++n_kept;
      } else {
        drops.push_back(json{{"clip_id", c.clip_id},
                             {"reason", "visual"},
                             {"similarity", c.caption_asr_similarity.value_or(0.0)},
                             {"threshold", pc.caption_asr_sim_threshold}});
      }
    }
    const std::string rel = "clip/" + meta.video_id + ".json";
    fs::create_directories(wd("clip"));
    write_json_atomic(wd(rel), json{{"video_id", meta.video_id},
                                    {"media_ref", meta.media_ref},
                                    {"duration_s", meta.duration_s},
                                    {"clips", clips}});
    return kept({rel}, json{{"clips", clips.size()}, {"kept_clips", n_kept}, {"drops", drops}});
  }

  // --- frame ---------------------------------------------------------------

  StageReport frame() {
    const auto& pc = p.cfg_.pipeline;
    const auto settings = cfg_hash(json{{"extractor", to_string(pc.keyframe_extractor)},
                                        {"T", pc.ssim_threshold_T},
                                        {"fps", pc.frame_sample_fps},
                                        {"pixel", pc.pixel_threshold},
                                        {"semantic", pc.semantic_threshold},
                                        {"carry", pc.carry_reference_across_clips},
                                        {"score", pc.keyframe_score_threshold},
                                        {"jaccard", pc.ocr_dedup_jaccard},
                                        {"ocr", p.cfg_.services.ocr_backends}});
    std::vector<WorkItem> items;
    for (const auto& e : upstream("clip")) {
      WorkItem w;
      w.key = e.input_key;
      const auto src = wd(e.output_keys.at(0));
      w.hash = hash_of({read_text_file(src), settings});
      w.compute = [this, src, &pc] {
        try {
          return frame_item(src, pc);
        } catch (const IoError& e) {
          return pending(std::string("frame decode: ") + e.what());
        }
      };
      items.push_back(std::move(w));
    }
    auto m = manifest("frame");
    return run_items("frame", std::move(items), m);
  }

  std::vector<std::size_t> select(const std::vector<Frame>& frames, const std::string& tmp_dir,
                                  const PipelineConfig& pc, std::optional<Frame>& carried) {
    std::vector<GrayImage> px;
    for (const auto& f : frames) px.push_back(f.pixels);
    const GrayImage* ref = carried ? &carried->pixels : nullptr;
    switch (pc.keyframe_extractor) {
      case KeyframeExtractor::ssim: return keyframes_ssim(px, pc.ssim_threshold_T, ref);
      case KeyframeExtractor::pixel: return keyframes_pixel(px, pc.pixel_threshold, ref);
      case KeyframeExtractor::semantic: break;
    }
    fs::create_directories(wd(tmp_dir));
    std::vector<fs::path> paths;
    if (carried) {
      paths.push_back(wd(tmp_dir + "/carried.png"));
      save_png(carried->pixels, paths.back());
    }
    for (const auto& f : frames) {
      paths.push_back(wd(tmp_dir + "/" + std::to_string(f.index) + ".png"));
      save_png(f.pixels, paths.back());
    }
    auto vecs = p.services_->embed_images(paths);
    fs::remove_all(wd(tmp_dir));
    if (vecs.size() != paths.size()) throw ProtocolError("embed_images: vector count mismatch");
    if (!carried) return keyframes_semantic(vecs, pc.semantic_threshold);
    EmbeddingVector first = vecs.front();
    vecs.erase(vecs.begin());
    return keyframes_semantic(vecs, pc.semantic_threshold, &first);
  }

  ItemOutcome frame_item(const fs::path& src, const PipelineConfig& pc) {
    auto in = read_json_file(src);
    const auto video_id = in.at("video_id").get<std::string>();
    const fs::path media_ref = in.at("media_ref").get<std::string>();
    auto clips = in.at("clips").get<std::vector<VideoClip>>();

    std::vector<Keyframe> all;
    std::size_t sampled = 0;
    std::optional<Frame> carried;
    for (const auto& c : clips) {
      if (c.status != ClipStatus::kept) continue;
      auto frames = sample_frames(*p.media_, media_ref, c.start_s, c.end_s, pc.frame_sample_fps);
      sampled += frames.size();
      if (!pc.carry_reference_across_clips) carried.reset();
      auto idx = select(frames, "tmp/" + video_id + "/" + c.clip_id, pc, carried);
      const std::string dir = "frames/" + video_id + "/" + c.clip_id;
      fs::create_directories(wd(dir));
      for (auto i : idx) {
        const auto& f = frames[i];
        Keyframe kf;
        kf.frame_id = c.clip_id + "_f" + std::to_string(f.index);
        kf.clip_id = c.clip_id;
        kf.timestamp_s = f.timestamp_s;
        kf.image_ref = dir + "/" + std::to_string(f.index) + ".png";
        save_png(f.pixels, wd(kf.image_ref));
        all.push_back(std::move(kf));
      }
      if (!idx.empty()) carried = frames[idx.back()];
    }

    const auto n_keyframes = all.size();
    auto res = ocr_and_filter(std::move(all), *p.services_, p.cfg_.services.ocr_backends,
                              pc.keyframe_score_threshold,
                              [this](const std::string& ref) { return wd(ref); });
    dedup_ocr(res.kept, pc.ocr_dedup_jaccard);

    json drops = json::array();
    for (const auto& kf : res.dropped) {
      fs::remove(wd(kf.image_ref));
      drops.push_back(json{{"frame_id", kf.frame_id},
                           {"reason", "low_score"},
                           {"score", kf.score.value_or(0)},
                           {"threshold", pc.keyframe_score_threshold}});
    }
    std::size_t ocr_failed = 0;
    for (const auto& kf : res.kept) {
      ocr_failed += kf.ocr_failed ? 1 : 0;
      if (kf.ocr_text && !kf.ocr_text->empty() && !kf.ocr_kept)
        drops.push_back(json{{"frame_id", kf.frame_id}, {"reason", "ocr_duplicate"}});
    }

    json out_clips = json::array();
    for (const auto& c : clips) {
      json kfs = json::array();
      for (const auto& kf : res.kept)
        if (kf.clip_id == c.clip_id) kfs.push_back(kf);
      out_clips.push_back(json{{"clip", c}, {"keyframes", kfs}});
    }
    const std::string rel = "frame/" + video_id + ".json";
    fs::create_directories(wd("frame"));
    write_json_atomic(wd(rel), json{{"video_id", video_id}, {"clips", out_clips},
                                    {"dropped_frames", res.dropped}});
    return kept({rel}, json{{"sampled", sampled},
                            {"keyframes", n_keyframes},
                            {"kept", res.kept.size()},
                            {"dropped", res.dropped.size()},
                            {"ocr_failed", ocr_failed},
                            {"drops", drops}});
  }

  // --- assemble ------------------------------------------------------------

  StageReport assemble() {
    const auto& pc = p.cfg_.pipeline;
    std::vector<fs::path> sources;
    Sha256 h;
    for (const auto& e : upstream("frame")) {
      sources.push_back(wd(e.output_keys.at(0)));
      h.update(e.input_key).update("\n").update(read_text_file(sources.back())).update("\n");
    }
    json settings{{"strategy", to_string(pc.packing_strategy)},
                  {"token_budget", pc.token_budget},
                  {"max_images", pc.max_images_per_sample},
                  {"eov", pc.eov_token},
                  {"use_ocr", pc.use_ocr}};
    h.update(settings.dump());

    WorkItem w;
    w.key = "corpus";
    w.hash = h.hex();
    w.compute = [this, sources, &pc] {
      std::vector<VideoElements> videos;
      for (const auto& src : sources) {
        auto in = read_json_file(src);
        VideoFrames vf;
        vf.video_id = in.at("video_id").get<std::string>();
        for (const auto& c : in.at("clips"))
          vf.clips.push_back({c.at("clip").get<VideoClip>(), c.at("keyframes").get<std::vector<Keyframe>>()});
        videos.push_back({vf.video_id, interleave_video(vf, pc.use_ocr)});
      }
      PackOptions o;
      o.strategy = pc.packing_strategy;
      o.token_budget = pc.token_budget;
      o.max_images = pc.max_images_per_sample;
      o.eov_token = pc.eov_token;
      auto packed = pack(videos, o);
      SampleRules rules;
      rules.eov_token = pc.eov_token;
      if (pc.packing_strategy != PackingStrategy::per_video) {
        rules.token_budget = pc.token_budget;
        rules.max_images = pc.max_images_per_sample;
      }
      emit(packed.samples, wd("corpus.jsonl"), rules);
      json drops = json::array();
      for (const auto& x : packed.excluded)
        drops.push_back(json{{"video_id", x.video_id}, {"reason", x.reason}});
      std::size_t oversized = 0;
      for (const auto& s : packed.samples) oversized += s.oversized ? 1 : 0;
      return kept({"corpus.jsonl"}, json{{"strategy", to_string(pc.packing_strategy)},
                                         {"videos", videos.size()},
                                         {"oversized", oversized},
                                         {"stats", stats_to_json(compute_stats(packed.samples))},
                                         {"drops", drops}});
    };
    std::vector<WorkItem> items;
    items.push_back(std::move(w));
    auto m = manifest("assemble");
    auto rep = run_items("assemble", std::move(items), m);
    if (auto e = m.find("corpus")) rep.summary = e->extra.value("stats", json::object());
    return rep;
  }

  // --- metrics -------------------------------------------------------------

  StageReport metrics() {
    const auto corpus = wd("corpus.jsonl");
    if (!fs::exists(corpus)) throw StageError("corpus.jsonl not found; run 'assemble' first");
    WorkItem w;
    w.key = "report";
    w.hash = hash_of({read_text_file(corpus)});
    w.compute = [this, corpus] {
      auto samples = read_corpus(corpus);
      auto insi = insi_sim(samples, *p.services_, [this](const std::string& r) { return p.resolve(r); });
      auto ppl = ppl_report(samples, *p.services_);
      json report{{"stats", stats_to_json(compute_stats(samples))},
                  {"insi_sim", insi_sim_report_to_json(insi)},
                  {"ppl", json{{"mean_ppl", ppl.mean_ppl},
                               {"n_scored", ppl.per_sample.size()},
                               {"skipped", ppl.skipped}}}};
      fs::create_directories(wd("metrics"));
      write_json_atomic(wd("metrics/report.json"), report);
      write_file_atomic(wd("metrics/insi_sim.csv"), insi_sim_report_csv(insi));
      return kept({"metrics/report.json", "metrics/insi_sim.csv"});
    };
    std::vector<WorkItem> items;
    items.push_back(std::move(w));
    auto m = manifest("metrics");
    return run_items("metrics", std::move(items), m);
  }
};

Pipeline::Pipeline(AppConfig cfg, fs::path workdir, PipelineOptions opts,
                   std::shared_ptr<Services> services, std::shared_ptr<MediaToolkit> media)
    : cfg_(std::move(cfg)),
      workdir_(std::move(workdir)),
      opts_(std::move(opts)),
      services_(std::move(services)),
      media_(std::move(media)),
      impl_(std::make_unique<Impl>(*this)) {
  cfg_.pipeline.validate();
  if (!services_) services_ = make_services(cfg_);
  if (!media_) media_ = std::make_shared<CompositeMedia>(cfg_.media.ffmpeg);
}

Pipeline::~Pipeline() = default;

fs::path Pipeline::resolve(const std::string& ref) const {
  fs::path p(ref);
  return p.is_absolute() ? p : workdir_ / p;
}

StageReport Pipeline::run_stage(const std::string& stage) {
  fs::create_directories(workdir_);
  if (stage == "collect") return impl_->collect();
  if (stage == "video") return impl_->video();
  if (stage == "clip") return impl_->clip();
  if (stage == "frame") return impl_->frame();
  if (stage == "assemble") return impl_->assemble();
  if (stage == "metrics") return impl_->metrics();
  throw ArgumentError("unknown stage '" + stage + "'");
}

std::vector<StageReport> Pipeline::run(const std::string& stage) {
  if (stage != "all") return {run_stage(stage)};
  std::vector<StageReport> out;
  for (const char* s : kStages) {
    out.push_back(run_stage(s));
    if (!out.back().ok()) break;
  }
  return out;
}

json Pipeline::doctor() {
  json checks = json::array();
  auto add = [&](const std::string& name, const std::string& status, const std::string& detail) {
    checks.push_back(json{{"name", name}, {"status", status}, {"detail", detail}});
  };

  auto media_issue = ExternalMedia(cfg_.media.ffmpeg).diagnose();
  if (media_issue.empty()) {
    add("media:ffmpeg", "ok", cfg_.media.ffmpeg);
  } else {
    // Synthetic fixtures decode in-process, so mock runs do not need ffmpeg.
    add("media:ffmpeg", cfg_.services.mode == "mock" ? "warn" : "fail", media_issue);
  }
  add("media:synthetic", "ok", "in-process renderer");

  static const char* endpoints[] = {"/transcribe", "/refine", "/score", "/caption", "/embed", "/ocr", "/ppl"};
  if (cfg_.services.mode == "mock") {
    for (const char* ep : endpoints) add(std::string("service:") + ep, "ok", "mock");
  } else {
    HttpServices::Options o;
    o.base_url = cfg_.services.base_url;
    o.token = cfg_.services.token;
    HttpServices client(o);
    for (const char* ep : endpoints) {
      auto issue = client.probe(ep);
      add(std::string("service:") + ep, issue.empty() ? "ok" : "fail",
          issue.empty() ? cfg_.services.base_url + ep : cfg_.services.base_url + ep + ": " + issue);
    }
  }

  std::error_code ec;
  fs::create_directories(workdir_, ec);
  const auto probe = workdir_ / ".doctor-probe";
  bool writable = !ec;
  if (writable) {
    std::ofstream out(probe, std::ios::binary);
    writable = static_cast<bool>(out << "ok");
  }
  fs::remove(probe, ec);
  add("workdir", writable ? "ok" : "fail",
      writable ? workdir_.string() : workdir_.string() + " is not writable");

  if (cfg_.inputs.search_backend.rfind("fixture:", 0) == 0) {
    const fs::path dir = cfg_.inputs.search_backend.substr(8);
    add("search", fs::exists(dir / "index.json") ? "ok" : "fail", (dir / "index.json").string());
  }
  add("taxonomy", fs::exists(cfg_.inputs.taxonomy) ? "ok" : "fail", cfg_.inputs.taxonomy.string());

  bool ok = true;
  for (const auto& c : checks) ok = ok && c["status"] != "fail";
  return json{{"ok", ok}, {"checks", checks}};
}

}  // namespace vtb
