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


/* C interface to the t2sql library.
 *
 * Every function returns a t2sql_status. On failure the message is
 * available from t2sql_last_error() on the same thread until the next call.
 * Strings returned through char** out-parameters are owned by the caller and
 * released with t2sql_string_free.
 */

#ifndef T2SQL_T2SQL_H_
#define T2SQL_T2SQL_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define T2SQL_API __declspec(dllexport)
#else
#define T2SQL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum t2sql_status {
  T2SQL_OK = 0,
  T2SQL_INVALID_ARGUMENT = 1,
  T2SQL_IO = 2,
  T2SQL_CONFIG = 3,
  T2SQL_MISSING_DATABASE = 10,
  T2SQL_MALFORMED_RECORD = 11,
  T2SQL_METADATA_DECODE = 12,
  T2SQL_NOT_A_DATABASE = 13,
  T2SQL_QUERY_TIMEOUT = 14,
  T2SQL_UNKNOWN_COLUMN_IN_FILTER = 20,
  T2SQL_EMPTY_EXAMPLE_SQL = 21,
  T2SQL_UNSATISFIABLE_BUDGET = 22,
  T2SQL_NONPOSITIVE_SIMILARITY = 23,
  T2SQL_UNTERMINATED_STRING = 30,
  T2SQL_UNTERMINATED_COMMENT = 31,
  T2SQL_ZERO_VECTOR = 40,
  T2SQL_DIMENSION_MISMATCH = 41,
  T2SQL_ENDPOINT_UNREACHABLE = 50,
  T2SQL_HTTP_STATUS = 51,
  T2SQL_REPLAY_MISS = 52,
  T2SQL_EMPTY_RESPONSE = 53,
  T2SQL_STEP_PARSE_FAILURE = 60,
  T2SQL_SKELETON_PARSE_FAILURE = 61,
  T2SQL_COUNT_MISMATCH = 70,
  T2SQL_INTERNAL = 99
} t2sql_status;

typedef struct t2sql_config t2sql_config;
typedef struct t2sql_catalog t2sql_catalog;

typedef void (*t2sql_warning_fn)(const char* message, void* user_data);

T2SQL_API const char* t2sql_version(void);
T2SQL_API const char* t2sql_last_error(void);
T2SQL_API const char* t2sql_status_name(t2sql_status status);
T2SQL_API void t2sql_string_free(char* s);

/* NULL restores the default stderr sink. */
T2SQL_API void t2sql_set_warning_callback(t2sql_warning_fn fn, void* user_data);

/* Configuration. path may be NULL for defaults; environment variables are
 * applied after the file. */
T2SQL_API t2sql_status t2sql_config_load(const char* path, t2sql_config** out);
T2SQL_API t2sql_status t2sql_config_set(t2sql_config* config, const char* key, const char* value);
T2SQL_API t2sql_status t2sql_config_to_json(const t2sql_config* config, char** out_json);
T2SQL_API void t2sql_config_free(t2sql_config* config);

/* Catalogs. */
T2SQL_API t2sql_status t2sql_catalog_load(const char* benchmark_root, const char* database_id,
                                          t2sql_catalog** out);
T2SQL_API t2sql_status t2sql_catalog_open(const char* sqlite_path, const char* description_dir,
                                          t2sql_catalog** out);
T2SQL_API t2sql_status t2sql_catalog_to_json(const t2sql_catalog* catalog, char** out_json);
/* variant: "C_N", "C_T", ..., "C_A". */
T2SQL_API t2sql_status t2sql_render_schema(const t2sql_catalog* catalog, const char* variant,
                                           char** out_text);
T2SQL_API void t2sql_catalog_free(t2sql_catalog* catalog);

/* Text utilities. */
T2SQL_API t2sql_status t2sql_skeleton(const char* sql, char** out_text);
T2SQL_API t2sql_status t2sql_count_tokens(const char* text, size_t* out_count);
T2SQL_API t2sql_status t2sql_extract_sql(const char* raw_response, char** out_sql);
T2SQL_API t2sql_status t2sql_cosine(const double* a, const double* b, size_t dim, double* out);
/* rates must hold count + 1 doubles; rates[0] is the target section. */
T2SQL_API t2sql_status t2sql_plan_truncation(const double* similarities, size_t count,
                                             double temperature, double* rates);

/* Executes both queries read-only. out_json receives the outcome record. */
T2SQL_API t2sql_status t2sql_execute_and_compare(const char* predicted_sql, const char* gold_sql,
                                                 const char* sqlite_path, int64_t timeout_ms,
                                                 int* out_matched, char** out_json);

/* Commands. JSON results unless noted. */
T2SQL_API t2sql_status t2sql_cmd_ingest_check(const t2sql_config* config, char** out_json);
T2SQL_API t2sql_status t2sql_cmd_serialize_schema(const t2sql_config* config, char** out_json);
T2SQL_API t2sql_status t2sql_cmd_build_prompt(const t2sql_config* config, char** out_json);
T2SQL_API t2sql_status t2sql_cmd_curate(const t2sql_config* config, char** out_json);
T2SQL_API t2sql_status t2sql_cmd_run(const t2sql_config* config, char** out_json);
/* out_json carries the paths, counts and the printable statistics text. */
T2SQL_API t2sql_status t2sql_cmd_prep_sft(const t2sql_config* config, char** out_json);
/* Plain-text tables. */
T2SQL_API t2sql_status t2sql_cmd_report(const char* report_path, char** out_text);

#ifdef __cplusplus
}
#endif

#endif /* T2SQL_T2SQL_H_ */
