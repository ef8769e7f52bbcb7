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

#include "frostmil/common/json_io.h"

#include <fstream>
#include <sstream>

#include "frostmil/common/error.h"

namespace frostmil {

void RequireExists(const std::filesystem::path& path, const std::string& what) {
  if (!std::filesystem::exists(path)) {
    throw MissingInputError(what + " not found: " + path.string());
  }
}

std::string ReadTextFile(const std::filesystem::path& path) {
  RequireExists(path, "file");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInputError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kGeneric, "cannot write " + path.string());
  out << text;
}

Json ReadJsonFile(const std::filesystem::path& path) {
  const std::string text = ReadTextFile(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError("malformed JSON in " + path.string() + ": " +
                          e.what());
  }
}

void WriteJsonFile(const std::filesystem::path& path, const Json& doc) {
  WriteTextFile(path, doc.dump(2) + "\n");
}

template <typename T>
T GetField(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ValidationError(where + ": missing field '" + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ValidationError(where + ": field '" + key + "' has wrong type");
  }
}

template std::string GetField<std::string>(const Json&, const std::string&,
                                           const std::string&);
template int GetField<int>(const Json&, const std::string&, const std::string&);
template int64_t GetField<int64_t>(const Json&, const std::string&,
                                   const std::string&);
template uint64_t GetField<uint64_t>(const Json&, const std::string&,
                                     const std::string&);
template double GetField<double>(const Json&, const std::string&,
                                 const std::string&);
template bool GetField<bool>(const Json&, const std::string&,
                             const std::string&);

}  // namespace frostmil
