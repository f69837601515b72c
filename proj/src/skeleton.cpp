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

#include "t2sql/skeleton.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "t2sql/error.hpp"
#include "t2sql/text.hpp"

namespace t2sql {

namespace {

// Frozen: golden skeleton tests depend on this exact set.
constexpr std::array<std::string_view, 48> kKeywords = {
    "SELECT", "FROM",   "WHERE",     "ORDER",  "BY",      "GROUP",   "HAVING", "JOIN",
    "INNER",  "LEFT",   "ON",        "AS",     "DESC",    "ASC",     "LIMIT",  "DISTINCT",
    "UNION",  "INTERSECT", "EXCEPT", "AND",    "OR",      "NOT",     "IN",     "EXISTS",
    "BETWEEN", "LIKE",  "CASE",      "WHEN",   "THEN",    "ELSE",    "END",    "CAST",
    "NULL",   "IS",     "COUNT",     "SUM",    "AVG",     "MIN",     "MAX",    "OUTER",
    "CROSS",  "RIGHT",  "FULL",      "NATURAL", "USING",  "ALL",     "OFFSET", "WITH",
};

bool IsWordByte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == '$' || u >= 0x80;
}

bool IsDigit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Lexer {
 public:
  explicit Lexer(std::string_view sql) : s_(sql) {}

  std::vector<SqlToken> Run() {
    std::vector<SqlToken> out;
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (StartsWith("--")) {
        const size_t nl = s_.find('\n', pos_);
        pos_ = nl == std::string_view::npos ? s_.size() : nl + 1;
      } else if (StartsWith("/*")) {
        const size_t end = s_.find("*/", pos_ + 2);
        if (end == std::string_view::npos) {
          throw Error(ErrorCode::kUnterminatedComment, "unterminated /* comment");
        }
        pos_ = end + 2;
      } else if (c == '\'') {
        out.push_back({std::string(ReadQuoted('\'', '\'', /*keep_quotes=*/true)),
                       TokenKind::kLiteral});
      } else if ((c == 'x' || c == 'X') && pos_ + 1 < s_.size() && s_[pos_ + 1] == '\'') {
        ++pos_;
        out.push_back({"X" + ReadQuoted('\'', '\'', true), TokenKind::kLiteral});
      } else if (c == '"' || c == '`') {
        out.push_back({ReadQuoted(c, c, false), TokenKind::kIdentifier, true});
      } else if (c == '[') {
        out.push_back({ReadQuoted('[', ']', false), TokenKind::kIdentifier, true});
      } else if (IsDigit(c) || (c == '.' && pos_ + 1 < s_.size() && IsDigit(s_[pos_ + 1]))) {
        out.push_back({ReadNumber(), TokenKind::kLiteral});
      } else if (IsWordByte(c)) {
        const size_t start = pos_;
        while (pos_ < s_.size() && IsWordByte(s_[pos_])) ++pos_;
        std::string word(s_.substr(start, pos_ - start));
        if (IsSkeletonKeyword(word)) {
          out.push_back({ToUpper(word), TokenKind::kKeyword});
        } else {
          out.push_back({std::move(word), TokenKind::kIdentifier});
        }
      } else {
        out.push_back(ReadSymbol());
      }
    }
    return out;
  }

 private:
  bool StartsWith(std::string_view p) const { return s_.substr(pos_, p.size()) == p; }

  // Reads a quoted run starting at pos_. A doubled closing quote escapes it.
  std::string ReadQuoted(char open, char close, bool keep_quotes) {
    std::string text;
    if (keep_quotes) text.push_back(open);
    ++pos_;
    while (true) {
      if (pos_ >= s_.size()) {
        throw Error(ErrorCode::kUnterminatedString,
                    std::string("unterminated quoted text starting with ") + open);
      }
      const char c = s_[pos_++];
      if (c == close) {
        if (close != ']' && pos_ < s_.size() && s_[pos_] == close) {
          text.push_back(c);
          if (keep_quotes) text.push_back(c);
          ++pos_;
          continue;
        }
        if (keep_quotes) text.push_back(close);
        return text;
      }
      text.push_back(c);
    }
  }

  std::string ReadNumber() {
    const size_t start = pos_;
    if (StartsWith("0x") || StartsWith("0X")) {
      pos_ += 2;
      while (pos_ < s_.size() && std::isxdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return std::string(s_.substr(start, pos_ - start));
    }
    while (pos_ < s_.size() && IsDigit(s_[pos_])) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && IsDigit(s_[pos_])) ++pos_;
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && IsDigit(s_[p])) {
        pos_ = p;
        while (pos_ < s_.size() && IsDigit(s_[pos_])) ++pos_;
      }
    }
    return std::string(s_.substr(start, pos_ - start));
  }

  SqlToken ReadSymbol() {
    static constexpr std::array<std::string_view, 8> kTwoChar = {"<=", ">=", "<>", "!=",
                                                                 "==", "||", "<<", ">>"};
    for (auto op : kTwoChar) {
      if (StartsWith(op)) {
        pos_ += 2;
        return {std::string(op), TokenKind::kOperator};
      }
    }
    const char c = s_[pos_++];
    switch (c) {
      case ',':
      case '(':
      case ')':
      case '.':
      case ';':
        return {std::string(1, c), TokenKind::kPunctuation};
      default:
        return {std::string(1, c), TokenKind::kOperator};
    }
  }

  std::string_view s_;
  size_t pos_ = 0;
};

}  // namespace

bool IsSkeletonKeyword(std::string_view word) {
  return std::any_of(kKeywords.begin(), kKeywords.end(),
                     [&](std::string_view k) { return IEquals(k, word); });
}

std::vector<SqlToken> Tokenize(std::string_view sql) { return Lexer(sql).Run(); }

SqlSkeleton ExtractSkeleton(std::string_view sql) {
  SqlSkeleton skeleton;
  bool in_run = false;
  for (const auto& tok : Tokenize(sql)) {
    if (tok.kind == TokenKind::kKeyword) {
      if (!skeleton.text.empty()) skeleton.text += ' ';
      skeleton.text += tok.text;
      in_run = false;
    } else if (!in_run) {
      if (!skeleton.text.empty()) skeleton.text += ' ';
      skeleton.text += '_';
      in_run = true;
    }
  }
  return skeleton;
}

}  // namespace t2sql
