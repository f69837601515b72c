//
// Copyright 2026 The t2sql Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Small string helpers shared across modules.

#ifndef T2SQL_TEXT_HPP_
#define T2SQL_TEXT_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace t2sql {

std::string_view Trim(std::string_view s);
std::string ToLower(std::string_view s);
std::string ToUpper(std::string_view s);
bool IEquals(std::string_view a, std::string_view b);

// Replaces every run of whitespace (including newlines) with one space and
// trims both ends.
std::string CollapseWhitespace(std::string_view s);

// Decodes bytes as UTF-8, substituting U+FFFD for every invalid sequence.
std::string LossyUtf8(std::string_view bytes);

// Lower-case hex SHA-256 of the input bytes.
std::string Sha256Hex(std::string_view bytes);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view contents);

}  // namespace t2sql

#endif  // T2SQL_TEXT_HPP_
