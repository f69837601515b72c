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


// Few-shot example selection by averaged question, schema and SQL embedding
// similarity. Selected examples are emitted in ascending similarity so the
// closest one sits next to the target question.

#ifndef T2SQL_CURATION_HPP_
#define T2SQL_CURATION_HPP_

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "t2sql/bench.hpp"
#include "t2sql/schema.hpp"

namespace t2sql {

using Embedding = std::vector<double>;

// Embeds a batch of texts, one vector per input in input order.
using EmbeddingFn = std::function<std::vector<Embedding>(const std::vector<std::string>&)>;

// Throws ZeroVector or DimensionMismatch. Result is clamped to [-1, 1].
double Cosine(const Embedding& a, const Embedding& b);

struct PoolCandidate {
  const TaskInstance* instance = nullptr;
  const DatabaseCatalog* catalog = nullptr;
  Embedding question;
  Embedding schema;
  Embedding sql;
};

struct ExamplePool {
  std::vector<PoolCandidate> candidates;

  // Throws DimensionMismatch unless every vector shares one dimension.
  void Validate() const;
};

// Embeds every instance of the split. Schema text is the rendered schema of
// the instance's database under `variant`, embedded once per database.
ExamplePool BuildExamplePool(const BenchmarkSplit& split, SchemaVariant variant,
                             const EmbeddingFn& embed);

struct SimilarityTriple {
  std::size_t candidate_index = 0;
  double gamma_q = 0;
  double gamma_d = 0;
  double gamma_s = 0;
  double gamma_a = 0;
};

nlohmann::json TripleToJson(const SimilarityTriple& t);

struct TargetEmbeddings {
  Embedding question;
  Embedding schema;
  Embedding sql;
};

// One triple per candidate outside the target's database, in pool order.
std::vector<SimilarityTriple> ScoreEmbeddings(const TargetEmbeddings& target,
                                              const std::string& target_database_id,
                                              const ExamplePool& pool);

// Embeds the target question, its rendered schema and the draft SQL, then
// scores the pool.
std::vector<SimilarityTriple> ScoreCandidates(const TaskInstance& target,
                                              const DatabaseCatalog& target_catalog,
                                              const std::string& draft_sql,
                                              const ExamplePool& pool, SchemaVariant variant,
                                              const EmbeddingFn& embed);

struct CuratedSet {
  std::vector<SimilarityTriple> examples;  // ascending gamma_a
  std::size_t k = 0;
};

// The k highest gamma_a triples (lower candidate index wins ties), ordered
// ascending by gamma_a, ties by candidate index.
CuratedSet SelectTopK(const std::vector<SimilarityTriple>& triples, std::size_t k);

}  // namespace t2sql

#endif  // T2SQL_CURATION_HPP_
