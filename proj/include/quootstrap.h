/*
 * Quootstrap C API: unsupervised extraction of quotation-speaker pairs
 * from news corpora by pattern bootstrapping.
 *
 * All engine state lives behind opaque handles; every fallible call
 * returns a qs_status and leaves a message readable through
 * qs_last_error() on failure. Strings returned through out-parameters
 * are owned by the caller and released with qs_string_free().
 */
#ifndef QUOOTSTRAP_H
#define QUOOTSTRAP_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qs_status {
  QS_OK = 0,
  QS_ERR_CONFIG = 1,   /* bad option key/value, no seeds, ... */
  QS_ERR_IO = 2,       /* missing or unreadable input */
  QS_ERR_INTERNAL = 3  /* anything else */
} qs_status;

typedef struct qs_options qs_options_t;
typedef struct qs_pipeline qs_pipeline_t;
typedef struct qs_result qs_result_t;

const char* qs_version(void);
/* Message for the last failing call on this thread ("" when none). */
const char* qs_last_error(void);
void qs_string_free(char* s);

/* ---- configuration ---------------------------------------------- */

qs_options_t* qs_options_new(void);
void qs_options_free(qs_options_t* opts);

/*
 * String key/value configuration. Paths: corpus, aliases, seeds,
 * ground_truth, out. Numbers: max_iterations, filter_threshold,
 * min_support, window, group_len, min_quote_len, max_quote_len, tau,
 * max_wildcard_run, threads, max_line_bytes. Lists: cluster_thresholds
 * (comma-separated). Booleans (0/1/true/false): alias_case_insensitive,
 * cluster_case_insensitive, z_disjunctive. `seed` adds inline seed
 * patterns (one per line).
 */
qs_status qs_options_set(qs_options_t* opts, const char* key, const char* value);
qs_status qs_options_load_file(qs_options_t* opts, const char* path);

/* ---- pipeline ---------------------------------------------------- */

/* Ingests the corpus, loads aliases, tokenizes, annotates, clusters. */
qs_status qs_pipeline_open(const qs_options_t* opts, qs_pipeline_t** out);
void qs_pipeline_free(qs_pipeline_t* p);

size_t qs_pipeline_document_count(const qs_pipeline_t* p);
size_t qs_pipeline_cluster_count(const qs_pipeline_t* p);

/* Bootstrap loop with the configured seeds. */
qs_status qs_extract(qs_pipeline_t* p, qs_result_t** out);
/* Nearest-speaker attribution with conflict resolution. */
qs_status qs_baseline(qs_pipeline_t* p, qs_result_t** out);

/* ---- results ------------------------------------------------------ */

void qs_result_free(qs_result_t* r);
size_t qs_result_pair_count(const qs_result_t* r);
size_t qs_result_pattern_count(const qs_result_t* r);
size_t qs_result_iteration_count(const qs_result_t* r);
int qs_result_converged(const qs_result_t* r);

qs_status qs_result_write_pairs(const qs_result_t* r, const char* path);
qs_status qs_result_write_patterns(const qs_result_t* r, const char* path);
qs_status qs_result_write_report(const qs_result_t* r, const char* path);
qs_status qs_result_patterns_text(const qs_result_t* r, char** out);

/* ---- evaluation / statistics -------------------------------------- */

/* Scores a pairs file against a ground-truth TSV; returns a JSON report
 * (micro, macro, per-speaker). */
qs_status qs_evaluate_files(const char* pairs_path, const char* ground_truth_path,
                            const qs_options_t* opts, char** report_json_out);

/* CCDF table as CSV; `which` is "quotations_per_speaker" or
 * "occurrences_per_quotation". */
qs_status qs_stats_csv(const char* pairs_path, const char* which, char** csv_out);

#ifdef __cplusplus
}
#endif

#endif /* QUOOTSTRAP_H */
