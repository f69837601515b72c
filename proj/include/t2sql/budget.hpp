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

// Token counting and the two column-truncation strategies that keep prompts
// inside the context window.
//
// Target truncation removes random non-target columns from a single schema,
// re-measuring after every removal. Example truncation spreads the token
// excess over the target and example schemas in proportion to softmax
// truncation rates, so the least similar example gives up the most columns.

#ifndef T2SQL_BUDGET_HPP_
#define T2SQL_BUDGET_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "t2sql/schema.hpp"

namespace t2sql {

using TokenCounter = std::function<std::size_t(std::string_view)>;

// Frozen dependency-free segmentation: maximal runs of word bytes
// ([A-Za-z0-9_] and any byte >= 0x80) are one token, every other
// non-whitespace byte is its own token.
std::size_t CountTokens(std::string_view text);
TokenCounter DefaultTokenCounter();

struct TokenBudget {
  std::size_t max_context = 2048;
  std::size_t response_reserve = 200;

  // Largest allowed prompt for inference.
  std::size_t PromptLimit() const { return max_context - response_reserve; }
  void Validate() const;
};

struct ColumnPartition {
  ColumnFilter target;
  ColumnFilter non_target;
};

// With a reference SQL: target = columns named in the SQL (whose table is
// also named there) plus key columns. Without: columns whose name or
// description shares a normalized content word with the question, plus keys.
ColumnPartition PartitionColumns(const DatabaseCatalog& catalog,
                                 const std::optional<std::string>& reference_sql,
                                 std::string_view question);

// Content words used by the inference-path partition (lowercased, trailing
// plural "s" stripped, stopwords dropped).
std::vector<std::string> NormalizedWords(std::string_view text);

struct TruncationRecord {
  // One entry per schema section; index 0 is the target schema.
  std::vector<std::vector<ColumnRef>> removed_columns;
  std::size_t tokens_before = 0;
  std::size_t tokens_after = 0;

  std::size_t TotalRemoved() const;
  bool Truncated() const { return TotalRemoved() > 0; }
};

struct TargetTruncation {
  DatabaseCatalog filtered;
  ColumnFilter keep;
  TruncationRecord record;
};

// Measures the full prompt for a candidate set of retained columns.
using FilterMeasure = std::function<std::size_t(const ColumnFilter&)>;

// Removes seeded-random non-target columns from `base_keep` one at a time
// until measure(keep) <= limit. Throws UnsatisfiableBudget when even the
// target columns alone do not fit.
TargetTruncation TruncateTarget(const DatabaseCatalog& catalog, const ColumnPartition& partition,
                                const ColumnFilter& base_keep, const FilterMeasure& measure,
                                std::size_t limit, std::uint64_t seed);

struct TruncationPlan {
  std::vector<double> rates;  // rho_0 (target) .. rho_k
  double temperature = 1.0;
};

// softmax({1/g_0, ..., 1/g_k} / T) with g_0 = 1. Similarities must lie in
// (0, 1]; throws NonpositiveSimilarity otherwise.
TruncationPlan PlanExampleTruncation(const std::vector<double>& similarities,
                                     double temperature);

// Clamps non-positive similarities to 1e-6 (with a warning) before planning.
double ClampSimilarity(double similarity);

struct SchemaSection {
  const DatabaseCatalog* catalog = nullptr;
  ColumnPartition partition;
  ColumnFilter keep;
};

struct SectionMeasures {
  // Tokens contributed by one section's schema text.
  std::function<std::size_t(const SchemaSection&)> section;
  // Tokens of the complete prompt.
  std::function<std::size_t(const std::vector<SchemaSection>&)> prompt;
};

// sections[0] is the target schema, sections[i] the i-th example; plan.rates
// must have one entry per section. Mutates each section's keep set.
TruncationRecord TruncateExamples(std::vector<SchemaSection>& sections, const TruncationPlan& plan,
                                  std::size_t limit, std::uint64_t seed,
                                  const SectionMeasures& measures);

// SplitMix64 stream; the seeded shuffles only depend on this generator, so
// results are identical across standard libraries.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t Next();
  // Uniform in [0, bound).
  std::uint64_t Below(std::uint64_t bound);

  template <typename T>
  void Shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[Below(i)]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace t2sql

#endif  // T2SQL_BUDGET_HPP_
