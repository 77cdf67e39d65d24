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

#ifndef LFDQ_JSONIO_HPP_
#define LFDQ_JSONIO_HPP_

// File and JSON helpers shared by the config readers and writers.

#include <string>

#include "json.hpp"

namespace lfdq {

// Throws Error(kFileMissing) if the file cannot be opened.
std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& text);

// Throws Error(kSchemaViolation) on malformed JSON.
nlohmann::json ParseJsonText(const std::string& text);
nlohmann::json LoadJsonFile(const std::string& path);

// Throws Error(kSchemaViolation) when `key` is absent.
void RequireKey(const nlohmann::json& j, const char* key);

// Reads a fixed-arity numeric array into `out`.
void ReadNumbers(const nlohmann::json& j, double* out, std::size_t n, const char* what);

}  // namespace lfdq

#endif  // LFDQ_JSONIO_HPP_
