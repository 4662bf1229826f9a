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
#include <functional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace vtb {

using json = nlohmann::ordered_json;

std::string read_text_file(const std::filesystem::path& path);
json read_json_file(const std::filesystem::path& path);

// Writes to a sibling temp file and renames over the target, so readers never
// observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
void write_json_atomic(const std::filesystem::path& path, const json& value);

// Calls fn(line, line_number) for every non-empty line. Line numbers are 1-based.
void for_each_line(const std::filesystem::path& path,
                   const std::function<void(std::string_view, std::size_t)>& fn);

// Compact single-line dump used for every line-delimited record.
std::string dump_line(const json& value);

// Field accessors that raise ValidationError naming the field.
const json& require(const json& obj, std::string_view key);
std::string require_string(const json& obj, std::string_view key);
double require_number(const json& obj, std::string_view key);
long long require_int(const json& obj, std::string_view key);

}  // namespace vtb
