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

#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "core/json_io.hpp"

namespace vtb {

// One terminal record: either outputs or a drop reason.
struct ManifestEntry {
  std::string input_key;
  std::string input_hash;
  std::vector<std::string> output_keys;
  std::optional<std::string> drop_reason;
  std::string completed_at;
  json extra = json::object();  // stage-specific summary (e.g. corpus stats)
};

// Append-only line-delimited record of a stage's completed items.
//
// A trailing partial line (a crash mid-append) is discarded on open. Entries
// are keyed by input_key; committing a key whose input hash changed rewrites
// the file with that entry replaced, so keys stay unique.
class Manifest {
 public:
  Manifest(std::filesystem::path file, std::string stage, bool logical_clock);

  const std::string& stage() const { return stage_; }
  const std::filesystem::path& path() const { return file_; }

  std::optional<ManifestEntry> find(const std::string& input_key) const;
  // True when the key completed with the same input hash.
  bool is_complete(const std::string& input_key, const std::string& input_hash) const;

  // Stamps completed_at and persists. Thread-safe; entries keep commit order.
  void commit(ManifestEntry entry);

  std::vector<ManifestEntry> entries() const;
  std::size_t size() const;

 private:
  json to_record(const ManifestEntry& e) const;
  std::string stamp(std::size_t position) const;
  void rewrite_locked();

  std::filesystem::path file_;
  std::string stage_;
  bool logical_clock_;
  mutable std::mutex mu_;
  std::vector<ManifestEntry> entries_;
  std::map<std::string, std::size_t> index_;
};

ManifestEntry manifest_entry_from_json(const json& j);

}  // namespace vtb
