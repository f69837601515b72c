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


#include "t2sql/cot.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "t2sql/error.hpp"
#include "t2sql/gateway.hpp"
#include "t2sql/text.hpp"

namespace t2sql {

namespace {

bool IsWordChar(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || u >= 0x80;
}

// Case-insensitive whole-word search.
bool ContainsWord(std::string_view haystack_lower, std::string_view word) {
  const std::string w = ToLower(word);
  if (w.empty()) return false;
  size_t pos = 0;
  while ((pos = haystack_lower.find(w, pos)) != std::string_view::npos) {
    const bool left = pos == 0 || !IsWordChar(haystack_lower[pos - 1]);
    const size_t end = pos + w.size();
    const bool right = end >= haystack_lower.size() || !IsWordChar(haystack_lower[end]);
    if (left && right) return true;
    ++pos;
  }
  return false;
}

std::string StripQuotes(std::string_view s) {
  s = Trim(s);
  while (!s.empty() && (s.front() == '`' || s.front() == '"' || s.front() == '\'' ||
                        s.front() == '[' || s.front() == '-' || s.front() == '*')) {
    s.remove_prefix(1);
    s = Trim(s);
  }
  while (!s.empty() && (s.back() == '`' || s.back() == '"' || s.back() == '\'' ||
                        s.back() == ']' || s.back() == '.')) {
    s.remove_suffix(1);
  }
  return std::string(Trim(s));
}

std::vector<std::string> SplitItems(std::string_view block) {
  std::vector<std::string> items;
  std::string cur;
  for (char c : block) {
    if (c == ',' || c == '\n' || c == '\r') {
      items.push_back(StripQuotes(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  items.push_back(StripQuotes(cur));
  items.erase(std::remove(items.begin(), items.end(), std::string()), items.end());
  return items;
}

std::vector<std::string> SplitWhitespace(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(StripQuotes(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(StripQuotes(cur));
  return out;
}

const ColumnSpec* FindColumnCi(const TableSpec& table, std::string_view name) {
  for (const auto& c : table.columns) {
    if (IEquals(c.name, name)) return &c;
  }
  return nullptr;
}

std::vector<std::string> CatalogOrder(const DatabaseCatalog& catalog,
                                      const std::set<std::string>& names) {
  std::vector<std::string> out;
  for (const auto& t : catalog.tables) {
    if (names.count(t.name)) out.push_back(t.name);
  }
  return out;
}

TableColumns CatalogOrder(const DatabaseCatalog& catalog, const ColumnFilter& refs) {
  TableColumns out;
  for (const auto& t : catalog.tables) {
    std::vector<std::string> cols;
    for (const auto& c : t.columns) {
      if (refs.count({t.name, c.name})) cols.push_back(c.name);
    }
    if (!cols.empty()) out.emplace_back(t.name, std::move(cols));
  }
  return out;
}

bool IsPred(CotMode mode) { return mode == CotMode::kCotSpPred || mode == CotMode::kCotSkPred; }

class CotRunner {
 public:
  CotRunner(const TaskInstance& instance, const DatabaseCatalog& catalog,
            const CompleteFn& complete, CotMode mode, const CotOptions& options, CotFlavor flavor)
      : instance_(instance), catalog_(catalog), complete_(complete), options_(options),
        flavor_(flavor) {
    trace_.mode = mode;
    input_.instance = &instance;
    partition_ = PartitionColumns(catalog, std::nullopt,
                                  instance.question + " " + instance.external_knowledge);
  }

  CotTrace Run() {
    options_.budget.Validate();
    const bool pred = IsPred(trace_.mode);
    const ColumnFilter all = catalog_.AllColumnsFilter();

    const std::string r1 = Ask(1, SchemaVariant::kCD, all, partition_);
    std::vector<std::string> dropped;
    trace_.predicted_tables = ParseTableList(r1, catalog_, &dropped);
    for (const auto& d : dropped) Note("step 1 named unknown table '" + d + "'; dropped");

    std::vector<std::string> shown_tables = trace_.predicted_tables;
    if (shown_tables.empty()) {
      Note("step 1 produced no catalog table; using every table");
      for (const auto& t : catalog_.tables) shown_tables.push_back(t.name);
    }
    ColumnFilter keep2 = all;
    if (pred && options_.restrict_step2 && !trace_.predicted_tables.empty()) {
      keep2.clear();
      for (const auto& name : trace_.predicted_tables) {
        for (const auto& c : catalog_.FindTable(name)->columns) keep2.insert({name, c.name});
      }
    } else if (pred && options_.restrict_step2) {
      Note("falling back to the full schema for step 2");
    }
    input_.tables_related = FormatTableList(shown_tables);
    const std::string r2 = Ask(2, SchemaVariant::kCVDT, keep2, partition_);

    dropped.clear();
    trace_.predicted_columns = ParseColumnList(r2, catalog_, shown_tables, &dropped);
    for (const auto& d : dropped) Note("step 2 named unknown column '" + d + "'; dropped");
    ColumnFilter predicted;
    for (const auto& [t, cols] : trace_.predicted_columns) {
      for (const auto& c : cols) predicted.insert({t, c});
    }
    ColumnFilter keep3 = all;
    if (pred) {
      if (predicted.empty()) {
        Note("step 2 produced no catalog column; later steps reuse the step-2 schema");
        keep3 = keep2;
      } else {
        keep3 = predicted;
      }
    }
    input_.columns_related =
        FormatColumnList(predicted.empty() ? CatalogOrder(catalog_, keep2) : trace_.predicted_columns);
    ColumnPartition later = partition_;
    for (const auto& ref : predicted) {
      later.target.insert(ref);
      later.non_target.erase(ref);
    }

    const std::string r3 = Ask(3, SchemaVariant::kCVDT, keep3, later);
    if (flavor_ == CotFlavor::kSimple) {
      trace_.final_sql = ExtractSql(r3);
      return trace_;
    }
    trace_.skeleton = NormalizeSkeletonResponse(r3);
    input_.skeleton = trace_.skeleton->text;
    const std::string r4 = Ask(4, SchemaVariant::kCVDT, keep3, later);
    trace_.final_sql = ExtractSql(r4);
    return trace_;
  }

 private:
  void Note(std::string message) { trace_.warnings.push_back(std::move(message)); }

  std::string Ask(int step, SchemaVariant variant, const ColumnFilter& base_keep,
                  const ColumnPartition& partition) {
    CotStepInput in = input_;
    auto measure = [&](const ColumnFilter& keep) {
      in.schema = RenderSchema(catalog_, variant, &keep);
      return options_.counter(RenderCotStep(flavor_, step, in));
    };
    auto fit = TruncateTarget(catalog_, partition, base_keep, measure,
                              options_.budget.PromptLimit(),
                              options_.seed ^ (0x9E3779B97F4A7C15ULL * static_cast<unsigned>(step)));
    in.schema = RenderSchema(catalog_, variant, &fit.keep);
    PromptBundle bundle;
    bundle.text = RenderCotStep(flavor_, step, in);
    bundle.token_count = options_.counter(bundle.text);
    bundle.role = PromptRole::kCotStep;
    bundle.step_index = step;
    bundle.truncation = std::move(fit.record);
    trace_.step_prompts.push_back(bundle);
    std::string response = complete_(bundle.text);
    trace_.responses.push_back(response);
    if (Trim(response).empty()) {
      throw Error(ErrorCode::kStepParseFailure,
                  "step " + std::to_string(step) + " returned an empty response");
    }
    return response;
  }

  const TaskInstance& instance_;
  const DatabaseCatalog& catalog_;
  const CompleteFn& complete_;
  CotOptions options_;
  CotFlavor flavor_;
  CotTrace trace_;
  CotStepInput input_;
  ColumnPartition partition_;
};

}  // namespace

std::string_view CotModeName(CotMode mode) {
  switch (mode) {
    case CotMode::kNone: return "none";
    case CotMode::kCotSpPred: return "cot_sp_pred";
    case CotMode::kCotSpFull: return "cot_sp_full";
    case CotMode::kCotSkPred: return "cot_sk_pred";
    case CotMode::kCotSkFull: return "cot_sk_full";
  }
  return "none";
}

CotMode ParseCotMode(std::string_view name) {
  std::string n;
  for (char c : Trim(name)) {
    if (c != '_' && c != '-') n.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (n == "none") return CotMode::kNone;
  if (n == "cotsppred") return CotMode::kCotSpPred;
  if (n == "cotspfull") return CotMode::kCotSpFull;
  if (n == "cotskpred") return CotMode::kCotSkPred;
  if (n == "cotskfull") return CotMode::kCotSkFull;
  throw Error(ErrorCode::kConfig, "unknown inference mode '" + std::string(name) + "'");
}

nlohmann::json TraceToJson(const CotTrace& trace) {
  nlohmann::json steps = nlohmann::json::array();
  for (size_t i = 0; i < trace.step_prompts.size(); ++i) {
    auto s = PromptBundleToJson(trace.step_prompts[i]);
    s["response"] = i < trace.responses.size() ? nlohmann::json(trace.responses[i]) : nullptr;
    steps.push_back(std::move(s));
  }
  nlohmann::json cols = nlohmann::json::object();
  for (const auto& [t, cs] : trace.predicted_columns) cols[t] = cs;
  return {{"mode", CotModeName(trace.mode)},
          {"steps", steps},
          {"predicted_tables", trace.predicted_tables},
          {"predicted_columns", cols},
          {"skeleton", trace.skeleton ? nlohmann::json(trace.skeleton->text) : nullptr},
          {"final_sql", trace.final_sql},
          {"warnings", trace.warnings}};
}

std::vector<std::string> ParseTableList(std::string_view response, const DatabaseCatalog& catalog,
                                        std::vector<std::string>* dropped) {
  const std::string lower = ToLower(response);
  std::set<std::string> found;
  const auto pos = lower.find("tables:");
  if (pos != std::string::npos) {
    std::string_view rest = Trim(response.substr(pos + 7));
    std::string_view block;
    if (!rest.empty() && rest.front() == '(') {
      const auto close = rest.find(')');
      block = rest.substr(1, close == std::string_view::npos ? std::string_view::npos : close - 1);
    } else {
      block = rest.substr(0, rest.find('\n'));
    }
    for (const auto& item : SplitItems(block)) {
      if (const auto* t = catalog.FindTableCi(item)) {
        found.insert(t->name);
        continue;
      }
      for (const auto& word : SplitWhitespace(item)) {
        if (word.empty()) continue;
        if (const auto* t = catalog.FindTableCi(word)) {
          found.insert(t->name);
        } else if (dropped) {
          dropped->push_back(word);
        }
      }
    }
    return CatalogOrder(catalog, found);
  }
  for (const auto& t : catalog.tables) {
    if (ContainsWord(lower, t.name)) found.insert(t.name);
  }
  return CatalogOrder(catalog, found);
}

TableColumns ParseColumnList(std::string_view response, const DatabaseCatalog& catalog,
                             const std::vector<std::string>& tables,
                             std::vector<std::string>* dropped) {
  ColumnFilter found;
  const std::string lower = ToLower(response);
  const auto pos = lower.find("columns:");
  if (pos != std::string::npos) {
    const std::string_view rest = response.substr(pos + 8);
    size_t boundary = 0;
    while (true) {
      const auto open = rest.find('(', boundary);
      if (open == std::string_view::npos) break;
      const auto close = rest.find(')', open);
      const auto colon = rest.rfind(':', open);
      const size_t end = close == std::string_view::npos ? rest.size() : close;
      if (colon != std::string_view::npos && colon >= boundary) {
        std::string name = StripQuotes(rest.substr(boundary, colon - boundary));
        while (!name.empty() && (name.front() == ',' || name.front() == ';')) {
          name = StripQuotes(std::string_view(name).substr(1));
        }
        if (IEquals(name.substr(0, 4), "and ")) name = StripQuotes(std::string_view(name).substr(4));
        const auto* table = catalog.FindTableCi(name);
        if (!table && dropped) dropped->push_back(name);
        if (table) {
          for (auto item : SplitItems(rest.substr(open + 1, end - open - 1))) {
            const auto dot = item.rfind('.');
            if (dot != std::string::npos) item = StripQuotes(std::string_view(item).substr(dot + 1));
            if (const auto* c = FindColumnCi(*table, item)) {
              found.insert({table->name, c->name});
            } else if (dropped) {
              dropped->push_back(table->name + "." + item);
            }
          }
        }
      }
      if (close == std::string_view::npos) break;
      boundary = close + 1;
    }
  }
  if (found.empty()) {
    std::set<std::string> scope(tables.begin(), tables.end());
    for (const auto& t : catalog.tables) {
      if (!scope.empty() && !scope.count(t.name)) continue;
      for (const auto& c : t.columns) {
        if (ContainsWord(lower, c.name) || lower.find(ToLower(t.name + "." + c.name)) != std::string::npos) {
          found.insert({t.name, c.name});
        }
      }
    }
  }
  return CatalogOrder(catalog, found);
}

std::string FormatTableList(const std::vector<std::string>& tables) {
  std::string out;
  for (size_t i = 0; i < tables.size(); ++i) {
    if (i) out += ", ";
    out += tables[i];
  }
  return out;
}

std::string FormatColumnList(const TableColumns& columns) {
  std::string out;
  for (size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ", ";
    out += columns[i].first + ": (";
    for (size_t j = 0; j < columns[i].second.size(); ++j) {
      if (j) out += ", ";
      out += columns[i].second[j];
    }
    out += ")";
  }
  return out;
}

SqlSkeleton NormalizeSkeletonResponse(std::string_view response) {
  const std::string lower = ToLower(response);
  size_t pos = 0;
  bool found = false;
  while ((pos = lower.find("select", pos)) != std::string::npos) {
    const bool left = pos == 0 || !IsWordChar(lower[pos - 1]);
    const bool right = pos + 6 >= lower.size() || !IsWordChar(lower[pos + 6]);
    if (left && right) {
      found = true;
      break;
    }
    ++pos;
  }
  if (!found) {
    throw Error(ErrorCode::kSkeletonParseFailure, "skeleton response contains no SELECT");
  }
  SqlSkeleton skeleton;
  try {
    skeleton = ExtractSkeleton(ExtractSql(response.substr(pos)));
  } catch (const Error& e) {
    throw Error(ErrorCode::kSkeletonParseFailure, std::string("unusable skeleton: ") + e.what());
  }
  return skeleton;
}

CotTrace RunCotSp(const TaskInstance& instance, const DatabaseCatalog& catalog,
                  const CompleteFn& complete, CotMode mode, const CotOptions& options) {
  if (mode != CotMode::kCotSpPred && mode != CotMode::kCotSpFull) {
    throw Error(ErrorCode::kInvalidArgument, "RunCotSp needs a cot_sp mode");
  }
  return CotRunner(instance, catalog, complete, mode, options, CotFlavor::kSimple).Run();
}

CotTrace RunCotSk(const TaskInstance& instance, const DatabaseCatalog& catalog,
                  const CompleteFn& complete, CotMode mode, const CotOptions& options) {
  if (mode != CotMode::kCotSkPred && mode != CotMode::kCotSkFull) {
    throw Error(ErrorCode::kInvalidArgument, "RunCotSk needs a cot_sk mode");
  }
  return CotRunner(instance, catalog, complete, mode, options, CotFlavor::kSkeleton).Run();
}

CotTrace RunCot(const TaskInstance& instance, const DatabaseCatalog& catalog,
                const CompleteFn& complete, CotMode mode, const CotOptions& options) {
  switch (mode) {
    case CotMode::kCotSpPred:
    case CotMode::kCotSpFull:
      return RunCotSp(instance, catalog, complete, mode, options);
    case CotMode::kCotSkPred:
    case CotMode::kCotSkFull:
      return RunCotSk(instance, catalog, complete, mode, options);
    case CotMode::kNone:
      break;
  }
  throw Error(ErrorCode::kInvalidArgument, "mode none has no chain-of-thought steps");
}

}  // namespace t2sql
