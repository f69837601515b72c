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

#ifndef T2SQL_SKELETON_HPP_
#define T2SQL_SKELETON_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace t2sql {

enum class TokenKind { kKeyword, kIdentifier, kLiteral, kOperator, kPunctuation };

struct SqlToken {
  std::string text;
  TokenKind kind;
  // Set for identifiers written as `x`, "x" or [x]; text holds the unquoted name.
  bool quoted = false;

  bool operator==(const SqlToken&) const = default;
};

// True when the word (any case) belongs to the frozen skeleton keyword set.
bool IsSkeletonKeyword(std::string_view word);

// Splits SQLite text into tokens. Comments are dropped; string literals and
// quoted identifiers are single tokens. Throws UnterminatedString or
// UnterminatedComment.
std::vector<SqlToken> Tokenize(std::string_view sql);

struct SqlSkeleton {
  std::string text;
  bool operator==(const SqlSkeleton&) const = default;
};

// Keywords kept in upper case, every maximal run of other tokens becomes "_".
SqlSkeleton ExtractSkeleton(std::string_view sql);

}  // namespace t2sql

#endif  // T2SQL_SKELETON_HPP_
