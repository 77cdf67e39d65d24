// Copyright 2026 The lfdq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lfdq/jsonio.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lfdq/error.hpp"

namespace lfdq {

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileMissing, path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteTextFile(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kFileMissing, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::kFileMissing, "write failed for " + path);
}

nlohmann::json ParseJsonText(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kSchemaViolation, e.what());
  }
}

nlohmann::json LoadJsonFile(const std::string& path) {
  return ParseJsonText(ReadTextFile(path));
}

void RequireKey(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::kSchemaViolation, std::string("missing key '") + key + "'");
  }
}

void ReadNumbers(const nlohmann::json& j, double* out, std::size_t n, const char* what) {
  if (!j.is_array() || j.size() != n) {
    throw Error(ErrorCode::kSchemaViolation,
                std::string(what) + ": expected " + std::to_string(n) + " numbers");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_number()) {
      throw Error(ErrorCode::kSchemaViolation, std::string(what) + ": non-numeric entry");
    }
    out[i] = j[i].get<double>();
  }
}

}  // namespace lfdq
