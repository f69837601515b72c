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

#include "t2sql/budget.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>
#include <unordered_set>

#include "t2sql/error.hpp"
#include "t2sql/skeleton.hpp"
#include "t2sql/text.hpp"

namespace t2sql {

namespace {

bool IsWordByte(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

const std::unordered_set<std::string>& Stopwords() {
  static const std::unordered_set<std::string> kWords = {
      "a",     "an",    "the",   "of",    "in",    "on",    "for",   "to",    "and",
      "or",    "is",    "are",   "was",   "were",  "be",    "been",  "what",  "which",
      "who",   "whom",  "whose", "how",   "many",  "much",  "with",  "by",    "from",
      "at",    "as",    "that",  "this",  "these", "those", "it",    "its",   "list",
      "please", "give", "show",  "find",  "all",   "each",  "their", "there", "have",
      "has",   "do",    "doe",   "did",   "not",   "no",    "than",  "then",  "among",
      "most",  "least", "top",   "state", "indicate", "between", "any", "only", "more",
      "less",  "under", "over",  "into",  "per",   "if",    "when",  "where"};
  return kWords;
}

std::string NormalizeWord(std::string w) {
  w = ToLower(w);
  if (w.size() > 3 && w.back() == 's' && w[w.size() - 2] != 's') w.pop_back();
  return w;
}

// Splits identifiers like "movieReleaseYear" or "movie_release_year".
void AppendWords(std::string_view text, std::vector<std::string>& out) {
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      std::string w = NormalizeWord(cur);
      if (w.size() >= 2 && !Stopwords().count(w)) out.push_back(std::move(w));
      cur.clear();
    }
  };
  for (size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (!std::isalnum(c) && c < 0x80) {
      flush();
      continue;
    }
    if (std::isupper(c) && !cur.empty() && std::islower(static_cast<unsigned char>(cur.back()))) {
      flush();
    }
    cur.push_back(static_cast<char>(c));
  }
  flush();
}

}  // namespace

std::size_t CountTokens(std::string_view text) {
  std::size_t count = 0;
  size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      ++i;
    } else if (IsWordByte(c)) {
      while (i < text.size() && IsWordByte(static_cast<unsigned char>(text[i]))) ++i;
      ++count;
    } else {
      ++i;
      ++count;
    }
  }
  return count;
}

TokenCounter DefaultTokenCounter() { return [](std::string_view t) { return CountTokens(t); }; }

void TokenBudget::Validate() const {
  if (!(max_context > response_reserve && response_reserve > 0)) {
    throw Error(ErrorCode::kConfig, "token budget requires max_context > response_reserve > 0");
  }
}

std::vector<std::string> NormalizedWords(std::string_view text) {
  std::vector<std::string> out;
  AppendWords(text, out);
  return out;
}

ColumnPartition PartitionColumns(const DatabaseCatalog& catalog,
                                 const std::optional<std::string>& reference_sql,
                                 std::string_view question) {
  ColumnPartition partition;
  partition.target = catalog.KeyColumns();

  if (reference_sql) {
    std::set<std::string> names;
    for (const auto& tok : Tokenize(*reference_sql)) {
      if (tok.kind == TokenKind::kIdentifier || tok.kind == TokenKind::kKeyword) {
        names.insert(ToLower(tok.text));
      }
    }
    for (const auto& t : catalog.tables) {
      if (!names.count(ToLower(t.name))) continue;
      for (const auto& c : t.columns) {
        if (names.count(ToLower(c.name))) partition.target.insert({t.name, c.name});
      }
    }
  } else {
    const auto q = NormalizedWords(question);
    const std::set<std::string> question_words(q.begin(), q.end());
    for (const auto& t : catalog.tables) {
      for (const auto& c : t.columns) {
        std::vector<std::string> words;
        AppendWords(c.name, words);
        if (c.description) AppendWords(*c.description, words);
        const bool shared = std::any_of(words.begin(), words.end(),
                                        [&](const std::string& w) { return question_words.count(w); });
        if (shared) partition.target.insert({t.name, c.name});
      }
    }
  }

  for (const auto& ref : catalog.AllColumns()) {
    if (!partition.target.count(ref)) partition.non_target.insert(ref);
  }
  return partition;
}

std::size_t TruncationRecord::TotalRemoved() const {
  std::size_t n = 0;
  for (const auto& s : removed_columns) n += s.size();
  return n;
}

std::uint64_t SeededRng::Next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SeededRng::Below(std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t r = Next();
    if (r >= threshold) return r % bound;
  }
}

TargetTruncation TruncateTarget(const DatabaseCatalog& catalog, const ColumnPartition& partition,
                                const ColumnFilter& base_keep, const FilterMeasure& measure,
                                std::size_t limit, std::uint64_t seed) {
  TargetTruncation result;
  result.keep = base_keep;
  result.record.removed_columns.resize(1);
  result.record.tokens_before = measure(result.keep);
  result.record.tokens_after = result.record.tokens_before;

  if (result.record.tokens_before > limit) {
    std::vector<ColumnRef> candidates;
    for (const auto& ref : base_keep) {
      if (partition.non_target.count(ref)) candidates.push_back(ref);
    }
    ColumnFilter minimal = base_keep;
    for (const auto& ref : candidates) minimal.erase(ref);
    const std::size_t floor_tokens = measure(minimal);
    if (floor_tokens > limit) {
      throw Error(ErrorCode::kUnsatisfiableBudget,
                  "target columns alone need " + std::to_string(floor_tokens) +
                      " tokens, limit is " + std::to_string(limit));
    }
    SeededRng rng(seed);
    rng.Shuffle(candidates);
    for (const auto& ref : candidates) {
      result.keep.erase(ref);
      result.record.removed_columns[0].push_back(ref);
      result.record.tokens_after = measure(result.keep);
      if (result.record.tokens_after <= limit) break;
    }
  }
  result.filtered = FilterCatalog(catalog, result.keep);
  return result;
}

double ClampSimilarity(double similarity) {
  if (similarity > 0) return similarity;
  Warn("similarity " + std::to_string(similarity) + " clamped to 1e-6 before inversion");
  return 1e-6;
}

TruncationPlan PlanExampleTruncation(const std::vector<double>& similarities,
                                     double temperature) {
  if (!(temperature > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "softmax temperature must be positive");
  }
  std::vector<double> logits;
  logits.reserve(similarities.size() + 1);
  logits.push_back(1.0 / temperature);
  for (double g : similarities) {
    if (!(g > 0) || !std::isfinite(g)) {
      throw Error(ErrorCode::kNonpositiveSimilarity,
                  "similarity " + std::to_string(g) + " is not in (0, 1]");
    }
    logits.push_back(1.0 / std::min(g, 1.0) / temperature);
  }
  const double max_logit = *std::max_element(logits.begin(), logits.end());
  TruncationPlan plan;
  plan.temperature = temperature;
  plan.rates.reserve(logits.size());
  double sum = 0;
  for (double l : logits) {
    plan.rates.push_back(std::exp(l - max_logit));
    sum += plan.rates.back();
  }
  for (double& r : plan.rates) r /= sum;
  return plan;
}

TruncationRecord TruncateExamples(std::vector<SchemaSection>& sections, const TruncationPlan& plan,
                                  std::size_t limit, std::uint64_t seed,
                                  const SectionMeasures& measures) {
  if (plan.rates.size() != sections.size()) {
    throw Error(ErrorCode::kInvalidArgument, "truncation plan has " +
                                                 std::to_string(plan.rates.size()) +
                                                 " rates for " + std::to_string(sections.size()) +
                                                 " schema sections");
  }
  TruncationRecord record;
  record.removed_columns.resize(sections.size());
  record.tokens_before = measures.prompt(sections);
  record.tokens_after = record.tokens_before;
  if (record.tokens_before <= limit) return record;

  std::vector<std::deque<ColumnRef>> queues(sections.size());
  {
    std::vector<SchemaSection> floor = sections;
    for (size_t i = 0; i < sections.size(); ++i) {
      std::vector<ColumnRef> candidates;
      for (const auto& ref : sections[i].keep) {
        if (sections[i].partition.non_target.count(ref)) candidates.push_back(ref);
      }
      for (const auto& ref : candidates) floor[i].keep.erase(ref);
      SeededRng rng(seed ^ (0xA24BAED4963EE407ULL * (i + 1)));
      rng.Shuffle(candidates);
      queues[i].assign(candidates.begin(), candidates.end());
    }
    const std::size_t floor_tokens = measures.prompt(floor);
    if (floor_tokens > limit) {
      throw Error(ErrorCode::kUnsatisfiableBudget,
                  "prompt needs " + std::to_string(floor_tokens) +
                      " tokens after removing every non-target column, limit is " +
                      std::to_string(limit));
    }
  }

  std::size_t total = record.tokens_before;
  while (total > limit) {
    const double excess = static_cast<double>(total - limit);
    double rate_sum = 0;
    for (size_t i = 0; i < sections.size(); ++i) {
      if (!queues[i].empty()) rate_sum += plan.rates[i];
    }
    if (rate_sum <= 0) {
      throw Error(ErrorCode::kUnsatisfiableBudget, "no removable columns left");
    }
    // Exhausted sections drop out; their share is re-apportioned by the
    // renormalized rates of the sections that still have columns.
    for (size_t i = 0; i < sections.size(); ++i) {
      if (queues[i].empty()) continue;
      const auto quota = static_cast<std::size_t>(
          std::max(1.0, std::ceil(excess * plan.rates[i] / rate_sum)));
      const std::size_t start = measures.section(sections[i]);
      std::size_t now = start;
      while (!queues[i].empty() && start - std::min(start, now) < quota) {
        const ColumnRef ref = queues[i].front();
        queues[i].pop_front();
        sections[i].keep.erase(ref);
        record.removed_columns[i].push_back(ref);
        now = measures.section(sections[i]);
      }
    }
    total = measures.prompt(sections);
  }
  record.tokens_after = total;
  return record;
}

}  // namespace t2sql
