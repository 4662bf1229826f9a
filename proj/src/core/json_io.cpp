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

#include "core/json_io.hpp"

#include <fstream>
#include <sstream>

#include <unistd.h>

#include "core/error.hpp"

namespace vtb {

namespace fs = std::filesystem;

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json_file(const fs::path& path) {
  auto text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("rename failed: " + path.string());
  }
}

void write_json_atomic(const fs::path& path, const json& value) {
  write_file_atomic(path, value.dump(1) + "\n");
}

void for_each_line(const fs::path& path,
                   const std::function<void(std::string_view, std::size_t)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    fn(line, n);
  }
}

std::string dump_line(const json& value) { return value.dump(); }

const json& require(const json& obj, std::string_view key) {
  if (!obj.is_object()) throw ValidationError("expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError("missing field '" + std::string(key) + "'");
  return *it;
}

std::string require_string(const json& obj, std::string_view key) {
  const auto& v = require(obj, key);
  if (!v.is_string()) throw ValidationError("field '" + std::string(key) + "' must be a string");
  return v.get<std::string>();
}

double require_number(const json& obj, std::string_view key) {
  const auto& v = require(obj, key);
  if (!v.is_number()) throw ValidationError("field '" + std::string(key) + "' must be a number");
  return v.get<double>();
}

long long require_int(const json& obj, std::string_view key) {
  const auto& v = require(obj, key);
  if (!v.is_number_integer())
    throw ValidationError("field '" + std::string(key) + "' must be an integer");
  return v.get<long long>();
}

}  // namespace vtb
