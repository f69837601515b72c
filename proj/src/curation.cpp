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


#include "t2sql/curation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "t2sql/error.hpp"

namespace t2sql {

double Cosine(const Embedding& a, const Embedding& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "cosine of vectors with dimensions " +
                                                   std::to_string(a.size()) + " and " +
                                                   std::to_string(b.size()));
  }
  double dot = 0, na = 0, nb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) throw Error(ErrorCode::kZeroVector, "cosine of a zero vector");
  const double c = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(c, -1.0, 1.0);
}

void ExamplePool::Validate() const {
  std::size_t dim = 0;
  for (const auto& c : candidates) {
    for (const auto* v : {&c.question, &c.schema, &c.sql}) {
      if (dim == 0) dim = v->size();
      if (v->size() != dim || dim == 0) {
        throw Error(ErrorCode::kDimensionMismatch, "example pool embeddings are ragged");
      }
    }
  }
}

ExamplePool BuildExamplePool(const BenchmarkSplit& split, SchemaVariant variant,
                             const EmbeddingFn& embed) {
  ExamplePool pool;
  if (split.instances.empty()) return pool;
  std::vector<std::string> questions, sqls;
  for (const auto& inst : split.instances) {
    questions.push_back(inst.question);
    sqls.push_back(inst.gold_sql);
  }
  std::vector<std::string> db_ids, schemas;
  for (const auto& [id, catalog] : split.databases) {
    db_ids.push_back(id);
    schemas.push_back(RenderSchema(catalog, variant));
  }
  const auto q = embed(questions);
  const auto s = embed(sqls);
  const auto d = embed(schemas);
  if (q.size() != questions.size() || s.size() != sqls.size() || d.size() != schemas.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "embedding count differs from input count");
  }
  std::map<std::string, const Embedding*> by_db;
  for (size_t i = 0; i < db_ids.size(); ++i) by_db[db_ids[i]] = &d[i];
  for (size_t i = 0; i < split.instances.size(); ++i) {
    const auto& inst = split.instances[i];
    pool.candidates.push_back(
        {&inst, &split.Catalog(inst.database_id), q[i], *by_db.at(inst.database_id), s[i]});
  }
  pool.Validate();
  return pool;
}

nlohmann::json TripleToJson(const SimilarityTriple& t) {
  return {{"candidate_index", t.candidate_index},
          {"gamma_q", t.gamma_q},
          {"gamma_d", t.gamma_d},
          {"gamma_s", t.gamma_s},
          {"gamma_a", t.gamma_a}};
}

std::vector<SimilarityTriple> ScoreEmbeddings(const TargetEmbeddings& target,
                                              const std::string& target_database_id,
                                              const ExamplePool& pool) {
  std::vector<SimilarityTriple> out;
  for (size_t i = 0; i < pool.candidates.size(); ++i) {
    const auto& c = pool.candidates[i];
    if (c.instance && c.instance->database_id == target_database_id) continue;
    SimilarityTriple t;
    t.candidate_index = i;
    t.gamma_q = Cosine(target.question, c.question);
    t.gamma_d = Cosine(target.schema, c.schema);
    t.gamma_s = Cosine(target.sql, c.sql);
    t.gamma_a = (t.gamma_q + t.gamma_d + t.gamma_s) / 3.0;
    out.push_back(t);
  }
  return out;
}

std::vector<SimilarityTriple> ScoreCandidates(const TaskInstance& target,
                                              const DatabaseCatalog& target_catalog,
                                              const std::string& draft_sql,
                                              const ExamplePool& pool, SchemaVariant variant,
                                              const EmbeddingFn& embed) {
  const auto e = embed({target.question, RenderSchema(target_catalog, variant), draft_sql});
  if (e.size() != 3) {
    throw Error(ErrorCode::kDimensionMismatch, "embedding count differs from input count");
  }
  return ScoreEmbeddings({e[0], e[1], e[2]}, target.database_id, pool);
}

CuratedSet SelectTopK(const std::vector<SimilarityTriple>& triples, std::size_t k) {
  CuratedSet set;
  set.k = k;
  std::vector<SimilarityTriple> ranked = triples;
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.gamma_a != b.gamma_a) return a.gamma_a > b.gamma_a;
    return a.candidate_index < b.candidate_index;
  });
  ranked.resize(std::min(k, ranked.size()));
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.gamma_a != b.gamma_a) return a.gamma_a < b.gamma_a;
    return a.candidate_index < b.candidate_index;
  });
  set.examples = std::move(ranked);
  return set;
}

}  // namespace t2sql
