// Copyright 2026 The rbmlogic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to rbmlogic.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns an rbml_status; on
 * failure rbml_last_error() describes the problem for the calling thread.
 * Strings returned through char** out-parameters are allocated by the
 * library and must be released with rbml_string_free().
 *
 * Option, query and report payloads are JSON documents.
 */
#ifndef RBMLOGIC_RBMLOGIC_H
#define RBMLOGIC_RBMLOGIC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RBML_BUILDING_LIBRARY)
#    define RBML_API __declspec(dllexport)
#  else
#    define RBML_API __declspec(dllimport)
#  endif
#else
#  define RBML_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rbml_status {
  RBML_OK = 0,
  RBML_ERR_PARSE = 1,
  RBML_ERR_INVALID_ARGUMENT = 2,
  RBML_ERR_PRECONDITION = 3,
  RBML_ERR_LIMIT = 4,
  RBML_ERR_IO = 5,
  RBML_ERR_VERIFY = 6, /* equivalence check exceeded its tolerance */
  RBML_ERR_INTERNAL = 7
} rbml_status;

typedef struct rbml_kb rbml_kb;
typedef struct rbml_model rbml_model;
typedef struct rbml_dataset rbml_dataset;

RBML_API const char* rbml_version(void);
RBML_API const char* rbml_status_name(rbml_status status);
/* Message of the most recent failure on this thread; never NULL. */
RBML_API const char* rbml_last_error(void);
RBML_API void rbml_string_free(char* s);

/* Knowledge bases: one weighted formula per line, "weight: formula". */
RBML_API rbml_status rbml_kb_parse(const char* text, rbml_kb** out);
RBML_API rbml_status rbml_kb_load(const char* path, rbml_kb** out);
RBML_API size_t rbml_kb_formula_count(const rbml_kb* kb);
RBML_API size_t rbml_kb_proposition_count(const rbml_kb* kb);
RBML_API void rbml_kb_free(rbml_kb* kb);

/* Builds a network. `kb` may be NULL when options name the propositions.
 * Options: epsilon, baseline ("sdnf" | "penalty" | "universal"),
 * names (extra propositions appended to the table), extra_hidden,
 * init_scale, seed, fold_unit_clauses, subsumption_merge,
 * elimination ("descending" | "ascending"), tau.
 * `report` (optional) receives hidden-unit and per-formula clause counts. */
RBML_API rbml_status rbml_compile(const rbml_kb* kb, const char* options_json, rbml_model** out,
                                  char** report);

RBML_API rbml_status rbml_model_load(const char* path, rbml_model** out);
RBML_API rbml_status rbml_model_from_json(const char* text, rbml_model** out);
RBML_API rbml_status rbml_model_save(const rbml_model* model, const char* path);
RBML_API rbml_status rbml_model_to_json(const rbml_model* model, char** out);
RBML_API size_t rbml_model_visible_count(const rbml_model* model);
RBML_API size_t rbml_model_hidden_count(const rbml_model* model);
RBML_API rbml_status rbml_model_energy_rank(const rbml_model* model, const uint8_t* x, size_t n,
                                            double* out);
RBML_API void rbml_model_free(rbml_model* model);

/* Query: {"evidence": {name: bool}, "targets": [names], "mode":
 * "gibbs" | "deterministic" | "conditional" | "exact", "steps", "restarts",
 * "sweeps", "seed", "tau_start", "tau_end"}. `kb` (optional) supplies the
 * weighted satisfiability of the answer. */
RBML_API rbml_status rbml_reason(const rbml_model* model, const char* query_json, const rbml_kb* kb,
                                 char** report);

/* Compares weighted_sat with -energy_rank/epsilon on every assignment.
 * epsilon <= 0 uses the model's own epsilon. Returns RBML_ERR_VERIFY when
 * the deviation exceeds `tolerance`; the report is produced either way. */
RBML_API rbml_status rbml_verify(const rbml_model* model, const rbml_kb* kb, double epsilon,
                                 double tolerance, double* max_deviation, char** report);

/* Datasets. `targets_json` is a JSON array of proposition names or NULL. */
RBML_API rbml_status rbml_dataset_load_csv(const char* path, const char* targets_json,
                                           rbml_dataset** out);
RBML_API rbml_status rbml_dataset_from_clauses(const rbml_kb* kb, const char* targets_json,
                                               rbml_dataset** out);
/* One-hot encodes a categorical CSV; `resolved_spec` (optional) receives the
 * spec with inferred values filled in. */
RBML_API rbml_status rbml_ingest(const char* csv_path, const char* spec_json, rbml_dataset** out,
                                 char** resolved_spec);
RBML_API rbml_status rbml_dataset_save_csv(const rbml_dataset* d, const char* path);
RBML_API rbml_status rbml_dataset_names(const rbml_dataset* d, char** names_json);
RBML_API size_t rbml_dataset_row_count(const rbml_dataset* d);
RBML_API size_t rbml_dataset_column_count(const rbml_dataset* d);
RBML_API void rbml_dataset_free(rbml_dataset* d);

/* Config: alpha, beta, lr, momentum, epochs, batch_size, cd_k, seed,
 * freeze_structure, targets (overrides the dataset's). `loss_csv`
 * (optional) receives "epoch,discriminative_nll,reconstruction" rows. */
RBML_API rbml_status rbml_train(const rbml_model* model, const rbml_dataset* data,
                                const char* config_json, rbml_model** out, char** loss_csv);

/* Options: prune_fractions, class (proposition names used for reliability;
 * defaults to the dataset's targets). `data` may be NULL. */
RBML_API rbml_status rbml_extract(const rbml_model* model, const rbml_dataset* data,
                                  const char* options_json, char** listing, char** report);

#ifdef __cplusplus
}
#endif

#endif /* RBMLOGIC_RBMLOGIC_H */
