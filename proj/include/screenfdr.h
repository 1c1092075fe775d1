// Copyright 2026 The screenfdr Authors
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
/*
 * screenfdr C API.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns an sfdr_status; on
 * failure sfdr_last_error() describes the problem for the calling thread.
 * Strings returned through char** out-parameters are released with
 * sfdr_string_free. Borrowed const char* results stay valid until the owning
 * handle is freed.
 */
#ifndef SCREENFDR_H_
#define SCREENFDR_H_

#include <stddef.h>
#include <stdint.h>

#if defined(SCREENFDR_BUILDING_LIBRARY)
#define SFDR_API __attribute__((visibility("default")))
#else
#define SFDR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sfdr_status {
  SFDR_OK = 0,
  SFDR_ERR_INVALID_ARGUMENT = 1,
  SFDR_ERR_PARSE = 2,
  SFDR_ERR_IO = 3,
  SFDR_ERR_OUT_OF_RANGE = 4,
  SFDR_ERR_INTERNAL = 5,
  SFDR_ERR_NULL_POINTER = 6
} sfdr_status;

typedef enum sfdr_scale { SFDR_SCALE_PVALUE = 0, SFDR_SCALE_ZSCORE = 1 } sfdr_scale;
typedef enum sfdr_tail { SFDR_TAIL_ONE_SIDED = 0, SFDR_TAIL_TWO_SIDED_ABS = 1 } sfdr_tail;
typedef enum sfdr_null_mode { SFDR_NULL_THEORETICAL = 0, SFDR_NULL_EMPIRICAL = 1 } sfdr_null_mode;
typedef enum sfdr_fdr_method {
  SFDR_METHOD_SCREEN = 0,
  SFDR_METHOD_SCREEN_IND = 1,
  SFDR_METHOD_REPFDR_UB = 2
} sfdr_fdr_method;
typedef enum sfdr_baseline_method {
  SFDR_BASELINE_FISHER = 0,
  SFDR_BASELINE_BH_COUNT = 1,
  SFDR_BASELINE_EXP_COUNT = 2
} sfdr_baseline_method;

typedef struct sfdr_matrix sfdr_matrix;
typedef struct sfdr_models sfdr_models;
typedef struct sfdr_clustering sfdr_clustering;
typedef struct sfdr_fdr_table sfdr_fdr_table;
typedef struct sfdr_baseline sfdr_baseline;
typedef struct sfdr_sim sfdr_sim;
typedef struct sfdr_truth sfdr_truth;

/* ---- library ---------------------------------------------------------- */

SFDR_API const char* sfdr_version(void);
SFDR_API const char* sfdr_last_error(void);
SFDR_API const char* sfdr_status_name(sfdr_status status);
/* 0 restores the default (all hardware threads). Results never depend on it. */
SFDR_API void sfdr_set_threads(unsigned threads);
SFDR_API void sfdr_string_free(char* s);

/* ---- statistics matrices ---------------------------------------------- */

SFDR_API sfdr_status sfdr_matrix_load(const char* path, sfdr_scale scale, sfdr_matrix** out);
/* values is row-major n x m. */
SFDR_API sfdr_status sfdr_matrix_create(size_t n, size_t m, const double* values,
                                        const char* const* gene_ids,
                                        const char* const* study_ids, sfdr_scale scale,
                                        sfdr_matrix** out);
SFDR_API sfdr_status sfdr_matrix_save(const sfdr_matrix* matrix, const char* path);
SFDR_API sfdr_status sfdr_matrix_dims(const sfdr_matrix* matrix, size_t* n, size_t* m);
SFDR_API sfdr_status sfdr_matrix_scale(const sfdr_matrix* matrix, sfdr_scale* scale);
SFDR_API sfdr_status sfdr_matrix_value(const sfdr_matrix* matrix, size_t gene, size_t study,
                                       double* value);
SFDR_API const char* sfdr_matrix_gene_id(const sfdr_matrix* matrix, size_t gene);
SFDR_API const char* sfdr_matrix_study_id(const sfdr_matrix* matrix, size_t study);
SFDR_API sfdr_status sfdr_matrix_to_zscores(const sfdr_matrix* p, sfdr_tail tail, sfdr_matrix** out);
SFDR_API sfdr_status sfdr_matrix_to_pvalues(const sfdr_matrix* z, sfdr_tail tail, sfdr_matrix** out);
SFDR_API void sfdr_matrix_free(sfdr_matrix* matrix);

/* ---- two-groups models ------------------------------------------------- */

typedef struct sfdr_normix_options {
  sfdr_null_mode null_mode;
  int max_iter;
  double rel_tol;
} sfdr_normix_options;

typedef struct sfdr_model_info {
  double pi0;
  double null_sigma;
  double nonnull_mu;
  double nonnull_sigma;
  double power;
  sfdr_null_mode null_mode;
  int converged;
  int degenerate;
  double loglik;
  int iterations;
} sfdr_model_info;

SFDR_API void sfdr_normix_options_default(sfdr_normix_options* opts);
/* Fits every study of a z-score matrix. */
SFDR_API sfdr_status sfdr_models_fit(const sfdr_matrix* z, const sfdr_normix_options* opts,
                                     sfdr_models** out);
SFDR_API sfdr_status sfdr_models_load(const char* path, sfdr_models** out);
SFDR_API sfdr_status sfdr_models_save(const sfdr_models* models, const char* path);
SFDR_API sfdr_status sfdr_models_to_json(const sfdr_models* models, char** json);
SFDR_API sfdr_status sfdr_models_count(const sfdr_models* models, size_t* count);
SFDR_API sfdr_status sfdr_models_get(const sfdr_models* models, size_t index,
                                     sfdr_model_info* info);
SFDR_API const char* sfdr_models_study_id(const sfdr_models* models, size_t index);
SFDR_API void sfdr_models_free(sfdr_models* models);

/* ---- study clustering -------------------------------------------------- */

typedef struct sfdr_cluster_options {
  int bootstrap;          /* replicates; 0 uses the full-data estimate */
  double edge_threshold;  /* in (0,1) */
  uint64_t seed;
  int restarts;           /* community-detection restarts */
  int em_max_iter;
  double em_rel_tol;
} sfdr_cluster_options;

SFDR_API void sfdr_cluster_options_default(sfdr_cluster_options* opts);
SFDR_API sfdr_status sfdr_cluster_studies(const sfdr_matrix* z, const sfdr_models* models,
                                          const sfdr_cluster_options* opts,
                                          sfdr_clustering** out);
SFDR_API sfdr_status sfdr_clustering_load(const char* path, sfdr_clustering** out);
SFDR_API sfdr_status sfdr_clustering_save(const sfdr_clustering* clustering, const char* path);
SFDR_API sfdr_status sfdr_clustering_to_json(const sfdr_clustering* clustering, char** json);
SFDR_API sfdr_status sfdr_clustering_count(const sfdr_clustering* clustering, size_t* clusters);
/* Cluster label of every study (m entries, labels 0..clusters-1). */
SFDR_API sfdr_status sfdr_clustering_labels(const sfdr_clustering* clustering, size_t* labels,
                                            size_t capacity, size_t* m);
SFDR_API void sfdr_clustering_free(sfdr_clustering* clustering);

/* ---- fdr_k estimation -------------------------------------------------- */

typedef struct sfdr_screen_options {
  int k_min;
  int k_max;
  size_t n_h;          /* configuration capacity, a power of two >= 4 */
  double cutoff;       /* selection threshold recorded with the table */
  int order_by_power;  /* absorb studies by decreasing power inside a cluster */
  int em_max_iter;
  double em_rel_tol;
  sfdr_cluster_options cluster;
} sfdr_screen_options;

SFDR_API void sfdr_screen_options_default(sfdr_screen_options* opts);

/* clustering may be NULL to estimate it. report_json may be NULL. */
SFDR_API sfdr_status sfdr_screen(const sfdr_matrix* z, const sfdr_models* models,
                                 const sfdr_clustering* clustering,
                                 const sfdr_screen_options* opts, sfdr_fdr_table** out,
                                 char** report_json);
SFDR_API sfdr_status sfdr_screen_ind(const sfdr_matrix* z, const sfdr_models* models, int k_min,
                                     int k_max, sfdr_fdr_table** out);
/* Uses k range, n_h, order_by_power and the EM settings of opts. */
SFDR_API sfdr_status sfdr_repfdr_ub(const sfdr_matrix* z, const sfdr_models* models,
                                    const sfdr_screen_options* opts, sfdr_fdr_table** out,
                                    char** report_json);

SFDR_API sfdr_status sfdr_fdr_table_dims(const sfdr_fdr_table* table, size_t* genes, int* k_min,
                                         int* k_max);
SFDR_API sfdr_status sfdr_fdr_table_method(const sfdr_fdr_table* table, sfdr_fdr_method* method);
SFDR_API sfdr_status sfdr_fdr_table_value(const sfdr_fdr_table* table, int k, size_t gene,
                                          double* value);
SFDR_API const char* sfdr_fdr_table_gene_id(const sfdr_fdr_table* table, size_t gene);
/* Genes with fdr_k <= cutoff. Writes at most capacity indices; *count gets the total. */
SFDR_API sfdr_status sfdr_fdr_table_select(const sfdr_fdr_table* table, int k, double cutoff,
                                           size_t* indices, size_t capacity, size_t* count);
SFDR_API sfdr_status sfdr_fdr_table_save(const sfdr_fdr_table* table, const char* path);
SFDR_API void sfdr_fdr_table_free(sfdr_fdr_table* table);

/* ---- baselines --------------------------------------------------------- */

/* fisher and bh_count need a p-value matrix and ignore models; exp_count needs
 * a z-score matrix and models. level <= 0 selects the default of 0.1. */
SFDR_API sfdr_status sfdr_baseline_run(const sfdr_matrix* data, const sfdr_models* models,
                                       sfdr_baseline_method method, double level,
                                       sfdr_baseline** out);
SFDR_API sfdr_status sfdr_baseline_statistic(const sfdr_baseline* result, size_t gene,
                                             double* value);
SFDR_API sfdr_status sfdr_baseline_save(const sfdr_baseline* result, const char* path);
SFDR_API void sfdr_baseline_free(sfdr_baseline* result);

/* BH step-up q-values of n p-values. */
SFDR_API sfdr_status sfdr_bh(const double* pvals, size_t n, double* qvals);

/* ---- simulation and evaluation ----------------------------------------- */

typedef struct sfdr_sim_options {
  const char* scenario; /* "s1", "s2" or "dense" */
  size_t n;
  size_t m;             /* ignored by "dense" (fixed at 30) */
  double x;             /* beta shape of non-null p-values */
  size_t clusters;      /* "s2": number of equal study blocks */
  double r;             /* "s2": within-block correlation */
  uint64_t seed;
} sfdr_sim_options;

SFDR_API void sfdr_sim_options_default(sfdr_sim_options* opts);
SFDR_API sfdr_status sfdr_simulate(const sfdr_sim_options* opts, sfdr_sim** out);
/* Copy of the simulated statistics (p-values, or z-scores for "dense"). */
SFDR_API sfdr_status sfdr_sim_data(const sfdr_sim* sim, sfdr_matrix** out);
SFDR_API sfdr_status sfdr_sim_save_truth(const sfdr_sim* sim, const char* path);
SFDR_API void sfdr_sim_free(sfdr_sim* sim);

typedef struct sfdr_eval_score {
  int k;
  double jaccard;
  double fdp;
  size_t n_selected;
} sfdr_eval_score;

SFDR_API sfdr_status sfdr_truth_load(const char* path, sfdr_truth** out);
SFDR_API sfdr_status sfdr_truth_evaluate(const sfdr_truth* truth, const char* const* selected,
                                         size_t count, int k, sfdr_eval_score* score);
SFDR_API void sfdr_truth_free(sfdr_truth* truth);

typedef struct sfdr_bench_options {
  sfdr_sim_options sim;
  const uint64_t* seeds;
  size_t n_seeds;
  const char* methods; /* comma-separated subset, or NULL for all six */
  int k_min;
  int k_max;
  double cutoff;
  size_t n_h;
  int bootstrap;
  double edge_threshold;
  sfdr_null_mode null_mode;
} sfdr_bench_options;

SFDR_API void sfdr_bench_options_default(sfdr_bench_options* opts);
/* CSV with columns scenario,k,method,seed,jaccard,fdp,n_selected. */
SFDR_API sfdr_status sfdr_bench_run(const sfdr_bench_options* opts, char** csv);

#ifdef __cplusplus
}
#endif

#endif /* SCREENFDR_H_ */
