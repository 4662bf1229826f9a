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

#include "core/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "core/error.hpp"

namespace vtb {

namespace fs = std::filesystem;

ManifestEntry manifest_entry_from_json(const json& j) {
  ManifestEntry e;
  e.input_key = require_string(j, "input_key");
  e.input_hash = require_string(j, "input_hash");
  e.output_keys = j.value("output_keys", std::vector<std::string>{});
  if (auto it = j.find("drop_reason"); it != j.end() && !it->is_null())
    e.drop_reason = it->get<std::string>();
  e.completed_at = j.value("completed_at", "");
  if (auto it = j.find("extra"); it != j.end()) e.extra = *it;
  if (e.output_keys.empty() && !e.drop_reason)
    throw ValidationError("manifest entry " + e.input_key + " is not terminal");
  return e;
}

Manifest::Manifest(fs::path file, std::string stage, bool logical_clock)
    : file_(std::move(file)), stage_(std::move(stage)), logical_clock_(logical_clock) {
  if (!fs::exists(file_)) return;
  auto text = read_text_file(file_);
  std::size_t keep = 0;  // bytes of complete, parseable lines
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string::npos) break;  // partial trailing line
    std::string_view line(text.data() + pos, nl - pos);
    if (!line.empty()) {
      try {
        auto e = manifest_entry_from_json(json::parse(line));
        if (auto it = index_.find(e.input_key); it != index_.end()) {
          entries_[it->second] = std::move(e);
        } else {
          index_[e.input_key] = entries_.size();
          entries_.push_back(std::move(e));
        }
      } catch (const std::exception& ex) {
        if (text.find('\n', nl + 1) != std::string::npos)
          throw ValidationError(file_.string() + ": corrupt manifest record: " + ex.what());
        break;
      }
    }
    pos = nl + 1;
    keep = pos;
  }
  if (keep != text.size()) fs::resize_file(file_, keep);
}

std::optional<ManifestEntry> Manifest::find(const std::string& input_key) const {
  std::lock_guard lock(mu_);
  auto it = index_.find(input_key);
  if (it == index_.end()) return std::nullopt;
  return entries_[it->second];
}

bool Manifest::is_complete(const std::string& input_key, const std::string& input_hash) const {
  std::lock_guard lock(mu_);
  auto it = index_.find(input_key);
  return it != index_.end() && entries_[it->second].input_hash == input_hash;
}

std::string Manifest::stamp(std::size_t position) const {
  char buf[64];
  if (logical_clock_) {
    std::snprintf(buf, sizeof buf, "logical:%06zu", position + 1);
    return buf;
  }
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json Manifest::to_record(const ManifestEntry& e) const {
  json j = json{{"stage", stage_},
                {"input_key", e.input_key},
                {"input_hash", e.input_hash},
                {"output_keys", e.output_keys},
                {"drop_reason", e.drop_reason ? json(*e.drop_reason) : json(nullptr)},
                {"completed_at", e.completed_at}};
  if (!e.extra.empty()) j["extra"] = e.extra;
  return j;
}

void Manifest::rewrite_locked() {
  std::string buf;
  for (const auto& e : entries_) buf += dump_line(to_record(e)) + "\n";
  write_file_atomic(file_, buf);
}

void Manifest::commit(ManifestEntry entry) {
  if (entry.output_keys.empty() && !entry.drop_reason)
    throw ArgumentError("manifest entry " + entry.input_key + " must have outputs or a drop reason");
  std::lock_guard lock(mu_);
  if (auto it = index_.find(entry.input_key); it != index_.end()) {
    entry.completed_at = stamp(it->second);
    entries_[it->second] = std::move(entry);
    rewrite_locked();
    return;
  }
  entry.completed_at = stamp(entries_.size());
  if (file_.has_parent_path()) fs::create_directories(file_.parent_path());
  std::ofstream out(file_, std::ios::app | std::ios::binary);
  if (!out) throw IoError("cannot append to " + file_.string());
  out << dump_line(to_record(entry)) << '\n';
  out.flush();
  if (!out) throw IoError("append failed: " + file_.string());
  index_[entry.input_key] = entries_.size();
  entries_.push_back(std::move(entry));
}

std::vector<ManifestEntry> Manifest::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

std::size_t Manifest::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

}  // namespace vtb
