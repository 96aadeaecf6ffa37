/*
 * Copyright 2026 The TGCC Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C API of the tgcc shared library: opaque handles, integer status codes,
 * JSON strings for structured parameters and reports. Strings returned
 * through char** outputs are owned by the caller and released with
 * tgcc_string_free. On any nonzero status, tgcc_last_error() describes the
 * failure (thread-local). */

#ifndef TGCC_H
#define TGCC_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef int32_t tgcc_status;

enum {
  TGCC_OK = 0,
  TGCC_E_ARGUMENT = 1,
  TGCC_E_STRUCTURAL = 2,
  TGCC_E_CAPACITY = 3,
  TGCC_E_NUMERIC = 4,
  TGCC_E_STATE = 5,
  TGCC_E_DATA_MISSING = 6,
  TGCC_E_DATA_HEADER = 7,
  TGCC_E_DATA_RANGE = 8,
  TGCC_E_DATA_PARSE = 9,
  TGCC_E_UNKNOWN = 10
};

typedef struct tgcc_graph tgcc_graph;         /* immutable dataset */
typedef struct tgcc_condensed tgcc_condensed; /* condensed dataset + run metadata */

const char* tgcc_version(void);
const char* tgcc_last_error(void);
void tgcc_string_free(char* s);
void tgcc_graph_free(tgcc_graph* g);
void tgcc_condensed_free(tgcc_condensed* c);

/* ---- datasets ---- */

tgcc_status tgcc_graph_load(const char* bundle_dir, tgcc_graph** out);
tgcc_status tgcc_graph_save(const tgcc_graph* g, const char* bundle_dir);

/* {"n":..,"d":..,"classes":..,"edges":..,"train":..,"val":..,"test":..} */
tgcc_status tgcc_graph_stats(const tgcc_graph* g, char** json_out);

/* params: {"blocks":[..],"p_in":..,"p_out":..,"d":..,"seed":..} */
tgcc_status tgcc_gen_sbm(const char* params_json, tgcc_graph** out);

/* Plain-text citation raw files <name>.content / <name>.cites.
 * stats_json_out (optional): {"n","d","classes","edges","skipped"} */
tgcc_status tgcc_import_planetoid(const char* raw_dir, const char* name, const char* out_dir,
                                  char** stats_json_out);

/* ---- condensation ---- */

/* config_json: full run configuration; "{}" uses the documented defaults. */
tgcc_status tgcc_condense(const tgcc_graph* g, const char* config_json, tgcc_condensed** out);

tgcc_status tgcc_condensed_save(const tgcc_condensed* c, const char* dir);
tgcc_status tgcc_condensed_load(const char* dir, tgcc_condensed** out);

/* Writes the intervened (augmented) graph as a bundle for inspection. */
tgcc_status tgcc_augment(const tgcc_graph* g, const char* config_json, const char* out_dir);

/* method: "random" | "herding" | "kcenter"; m <= 0 derives m from ratio. */
tgcc_status tgcc_baseline(const tgcc_graph* g, const char* method, double ratio, int m,
                          uint64_t seed, tgcc_condensed** out);

/* ---- evaluation ---- */

/* params: {"protocol":"node"|"link"|"transfer"|"transfer-link",
 *          "seeds":[..], optional "steps","lr","hidden","weighted",
 *          "sparsify_threshold","link_test_fraction","link_split_seed",
 *          "probe_steps","probe_lr"}.
 * report_json_out receives the EvalReport. */
tgcc_status tgcc_eval(const tgcc_condensed* c, const tgcc_graph* target, const char* params_json,
                      char** report_json_out);

/* Per-epoch loss table of a condensed run; format "tsv" or "json". */
tgcc_status tgcc_loss_report(const tgcc_condensed* c, const char* format, char** out);

#ifdef __cplusplus
}
#endif

#endif /* TGCC_H */
