// Copyright 2026 The frostmil Authors. All Rights Reserved.
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

#ifndef FROSTMIL_COMMON_JSON_IO_H_
#define FROSTMIL_COMMON_JSON_IO_H_

#include <filesystem>
#include <string>

#include "json.hpp"

namespace frostmil {

using Json = nlohmann::json;

/// Parses a JSON document. Missing file -> MissingInputError, parse failure
/// -> ValidationError.
Json ReadJsonFile(const std::filesystem::path& path);

/// Writes with sorted keys, two-space indent and a trailing newline so equal
/// documents produce equal bytes.
void WriteJsonFile(const std::filesystem::path& path, const Json& doc);

std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, const std::string& text);

/// Throws MissingInputError naming `what` if `path` does not exist.
void RequireExists(const std::filesystem::path& path, const std::string& what);

/// Typed field access that reports the offending field on failure.
template <typename T>
T GetField(const Json& obj, const std::string& key, const std::string& where);

}  // namespace frostmil

#endif  // FROSTMIL_COMMON_JSON_IO_H_
