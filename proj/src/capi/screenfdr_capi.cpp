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
#include "screenfdr.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "screenfdr/baselines.hpp"
#include "screenfdr/error.hpp"
#include "screenfdr/fdr_table.hpp"
#include "screenfdr/parallel.hpp"
#include "screenfdr/screen_pipeline.hpp"
#include "screenfdr/serialize.hpp"
#include "screenfdr/simbench.hpp"
#include "screenfdr/stats_matrix.hpp"
#include "screenfdr/study_cluster.hpp"

struct sfdr_matrix {
  sfdr::StatsMatrix m;
};
struct sfdr_models {
  std::vector<sfdr::TwoGroupsModel> v;
};
struct sfdr_clustering {
  sfdr::StudyClustering c;
};
struct sfdr_fdr_table {
  sfdr::FdrTable t;
};
struct sfdr_baseline {
  sfdr::BaselineResult r;
};
struct sfdr_sim {
  sfdr::SimInstance s;
};
struct sfdr_truth {
  std::vector<std::string> gene_ids;
  std::vector<int> counts;
  std::unordered_map<std::string, std::size_t> index;
};

namespace {

thread_local std::string t_last_error;

sfdr_status set_error(sfdr_status status, const std::string& msg) {
  t_last_error = msg;
  return status;
}

sfdr_status map_code(sfdr::ErrorCode code) {
  switch (code) {
    case sfdr::ErrorCode::invalid_argument: return SFDR_ERR_INVALID_ARGUMENT;
    case sfdr::ErrorCode::parse: return SFDR_ERR_PARSE;
    case sfdr::ErrorCode::io: return SFDR_ERR_IO;
    case sfdr::ErrorCode::out_of_range: return SFDR_ERR_OUT_OF_RANGE;
    case sfdr::ErrorCode::internal: return SFDR_ERR_INTERNAL;
  }
  return SFDR_ERR_INTERNAL;
}

template <typename F>
sfdr_status guarded(F&& body) {
  try {
    body();
    t_last_error.clear();
    return SFDR_OK;
  } catch (const sfdr::Error& e) {
    return set_error(map_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(SFDR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(SFDR_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(SFDR_ERR_INTERNAL, "unknown error");
  }
}

#define SFDR_REQUIRE_PTR(p)                                                  \
  do {                                                                       \
    if ((p) == nullptr) return set_error(SFDR_ERR_NULL_POINTER, #p " is NULL"); \
  } while (0)

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

sfdr::Scale to_scale(sfdr_scale s) {
  switch (s) {
    case SFDR_SCALE_PVALUE: return sfdr::Scale::pvalue;
    case SFDR_SCALE_ZSCORE: return sfdr::Scale::zscore;
  }
  sfdr::fail(sfdr::ErrorCode::invalid_argument, "unknown scale");
}

sfdr::Tail to_tail(sfdr_tail t) {
  switch (t) {
    case SFDR_TAIL_ONE_SIDED: return sfdr::Tail::one_sided;
    case SFDR_TAIL_TWO_SIDED_ABS: return sfdr::Tail::two_sided_abs;
  }
  sfdr::fail(sfdr::ErrorCode::invalid_argument, "unknown tail");
}

sfdr::NullMode to_null_mode(sfdr_null_mode m) {
  switch (m) {
    case SFDR_NULL_THEORETICAL: return sfdr::NullMode::theoretical;
    case SFDR_NULL_EMPIRICAL: return sfdr::NullMode::empirical;
  }
  sfdr::fail(sfdr::ErrorCode::invalid_argument, "unknown null mode");
}

sfdr::ClusterOptions to_cluster_options(const sfdr_cluster_options& o) {
  sfdr::ClusterOptions c;
  c.bootstrap = o.bootstrap;
  c.edge_threshold = o.edge_threshold;
  c.seed = o.seed;
  c.restarts = o.restarts;
  c.em.max_iter = o.em_max_iter;
  c.em.rel_tol = o.em_rel_tol;
  return c;
}

sfdr::ScreenOptions to_screen_options(const sfdr_screen_options& o) {
  sfdr::ScreenOptions s;
  s.k_min = o.k_min;
  s.k_max = o.k_max;
  s.n_h = o.n_h;
  s.cutoff = o.cutoff;
  s.order_by_power = o.order_by_power != 0;
  s.em.max_iter = o.em_max_iter;
  s.em.rel_tol = o.em_rel_tol;
  s.cluster = to_cluster_options(o.cluster);
  return s;
}

void check_models_match(const sfdr::StatsMatrix& z, const std::vector<sfdr::TwoGroupsModel>& models) {
  sfdr::require(models.size() == z.n_studies(),
                "model count " + std::to_string(models.size()) + " does not match study count " +
                    std::to_string(z.n_studies()));
  for (std::size_t j = 0; j < models.size(); ++j) {
    sfdr::require(models[j].study_id == z.study_ids[j],
                  "model " + std::to_string(j) + " is for study '" + models[j].study_id +
                      "' but the matrix has '" + z.study_ids[j] + "'");
  }
}

void write_text(const char* path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) sfdr::fail(sfdr::ErrorCode::io, std::string("cannot write '") + path + "'");
  out << text;
  if (!out) sfdr::fail(sfdr::ErrorCode::io, std::string("write failed for '") + path + "'");
}

}  // namespace

extern "C" {

const char* sfdr_version(void) { return SCREENFDR_VERSION_STRING; }

const char* sfdr_last_error(void) { return t_last_error.c_str(); }

const char* sfdr_status_name(sfdr_status status) {
  switch (status) {
    case SFDR_OK: return "ok";
    case SFDR_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case SFDR_ERR_PARSE: return "parse_error";
    case SFDR_ERR_IO: return "io_error";
    case SFDR_ERR_OUT_OF_RANGE: return "out_of_range";
    case SFDR_ERR_INTERNAL: return "internal_error";
    case SFDR_ERR_NULL_POINTER: return "null_pointer";
  }
  return "unknown";
}

void sfdr_set_threads(unsigned threads) { sfdr::set_thread_count(threads); }

void sfdr_string_free(char* s) { std::free(s); }

/* matrices */

sfdr_status sfdr_matrix_load(const char* path, sfdr_scale scale, sfdr_matrix** out) {
  SFDR_REQUIRE_PTR(path);
  SFDR_REQUIRE_PTR(out);
  return guarded([&] {
    auto h = std::make_unique<sfdr_matrix>();
    h->m = sfdr::load_matrix(path, to_scale(scale));
    *out = h.release();
  });
}

sfdr_status sfdr_matrix_create(size_t n, size_t m, const double* values,
                               const char* const* gene_ids, const char* const* study_ids,
                               sfdr_scale scale, sfdr_matrix** out) {
  SFDR_REQUIRE_PTR(out);
  if (n * m > 0) SFDR_REQUIRE_PTR(values);
  if (n > 0) SFDR_REQUIRE_PTR(gene_ids);
  if (m > 0) SFDR_REQUIRE_PTR(study_ids);
  return guarded([&] {
    auto h = std::make_unique<sfdr_matrix>();
    h->m.scale = to_scale(scale);
    for (size_t i = 0; i < n; ++i) {
      sfdr::require(gene_ids[i] != nullptr, "gene id is NULL");
      h->m.gene_ids.emplace_back(gene_ids[i]);
    }
    for (size_t j = 0; j < m; ++j) {
      sfdr::require(study_ids[j] != nullptr, "study id is NULL");
      h->m.study_ids.emplace_back(study_ids[j]);
    }
    h->m.values.assign(values, values + n * m);
    sfdr::validate(h->m);
    *out = h.release();
  });
}

sfdr_status sfdr_matrix_save(const sfdr_matrix* matrix, const char* path) {
  SFDR_REQUIRE_PTR(matrix);
  SFDR_REQUIRE_PTR(path);
  return guarded([&] { sfdr::write_matrix(std::filesystem::path(path), matrix->m); });
}

sfdr_status sfdr_matrix_dims(const sfdr_matrix* matrix, size_t* n, size_t* m) {
  SFDR_REQUIRE_PTR(matrix);
  if (n) *n = matrix->m.n_genes();
  if (m) *m = matrix->m.n_studies();
  return SFDR_OK;
}

sfdr_status sfdr_matrix_scale(const sfdr_matrix* matrix, sfdr_scale* scale) {
  SFDR_REQUIRE_PTR(matrix);
  SFDR_REQUIRE_PTR(scale);
  *scale = matrix->m.scale == sfdr::Scale::pvalue ? SFDR_SCALE_PVALUE : SFDR_SCALE_ZSCORE;
  return SFDR_OK;
}

sfdr_status sfdr_matrix_value(const sfdr_matrix* matrix, size_t gene, size_t study,
                              double* value) {
  SFDR_REQUIRE_PTR(matrix);
  SFDR_REQUIRE_PTR(value);
  if (gene >= matrix->m.n_genes() || study >= matrix->m.n_studies()) {
    return set_error(SFDR_ERR_OUT_OF_RANGE, "matrix index out of range");
  }
  *value = matrix->m(gene, study);
  return SFDR_OK;
}

const char* sfdr_matrix_gene_id(const sfdr_matrix* matrix, size_t gene) {
  if (!matrix || gene >= matrix->m.n_genes()) return nullptr;
  return matrix->m.gene_ids[gene].c_str();
}

const char* sfdr_matrix_study_id(const sfdr_matrix* matrix, size_t study) {
  if (!matrix || study >= matrix->m.n_studies()) return nullptr;
  return matrix->m.study_ids[study].c_str();
}

sfdr_status sfdr_matrix_to_zscores(const sfdr_matrix* p, sfdr_tail tail, sfdr_matrix** out) {
  SFDR_REQUIRE_PTR(p);
  SFDR_REQUIRE_PTR(out);
  return guarded([&] {
    auto h = std::make_unique<sfdr_matrix>();
    h->m = sfdr::pvalues_to_zscores(p->m, to_tail(tail));
    *out = h.release();
  });
}

sfdr_status sfdr_matrix_to_pvalues(const sfdr_matrix* z, sfdr_tail tail, sfdr_matrix** out) {
  SFDR_REQUIRE_PTR(z);
  SFDR_REQUIRE_PTR(out);
  return guarded([&] {
    auto h = std::make_unique<sfdr_matrix>();
    h->m = sfdr::zscores_to_pvalues(z->m, to_tail(tail));
    *out = h.release();
  });
}

void sfdr_matrix_free(sfdr_matrix* matrix) { delete matrix; }

/* models */

void sfdr_normix_options_default(sfdr_normix_options* opts) {
  if (!opts) return;
  const sfdr::NormixOptions d;
  opts->null_mode = SFDR_NULL_THEORETICAL;
  opts->max_iter = d.max_iter;
  opts->rel_tol = d.rel_tol;
}

sfdr_status sfdr_models_fit(const sfdr_matrix* z, const sfdr_normix_options* opts,
                            sfdr_models** out) {
  SFDR_REQUIRE_PTR(z);
  SFDR_REQUIRE_PTR(out);
  return guarded([&] {
    sfdr::NormixOptions no;
    if (opts) {
      no.null_mode = to_null_mode(opts->null_mode);
      no.max_iter = opts->max_iter;
      no.rel_tol = opts->rel_tol;
    }
    auto h = std::make_unique<sfdr_models>();
    h->v = sfdr::fit_models(z->m, no);
    *out = h.release();
  });
}

sfdr_status sfdr_models_load(const char* path, sfdr_models** out) {
  SFDR_REQUIRE_PTR(path);
  SFDR_REQUIRE_PTR(out);
  return guarded([&] {
    auto h = std::make_unique<sfdr_models>();
    h->v = sfdr::models_from_json(sfdr::read_json(path));
    *out = h.release();
  });
}

sfdr_status sfdr_models_save(const sfdr_models* models, const char* path) {
  SFDR_REQUIRE_PTR(models);
  SFDR_REQUIRE_PTR(path);
  return guarded([&] { sfdr::write_json(path, sfdr::models_to_json(models->v)); });
}

sfdr_status sfdr_models_to_json(const sfdr_models* models, char** json) {
  SFDR_REQUIRE_PTR(models);
  SFDR_REQUIRE_PTR(json);
  return guarded([&] { *json = dup_string(sfdr::models_to_json(models->v).dump(2)); });
}

sfdr_status sfdr_models_count(const sfdr_models* models, size_t* count) {
  SFDR_REQUIRE_PTR(models);
  SFDR_REQUIRE_PTR(count);
  *count = models->v.size();
  return SFDR_OK;
}

sfdr_status sfdr_models_get(const sfdr_models* models, size_t index, sfdr_model_info* info) {
  SFDR_REQUIRE_PTR(models);
  SFDR_REQUIRE_PTR(info);
  if (index >= models->v.size()) return set_error(SFDR_ERR_OUT_OF_RANGE, "model index out of range");
  const auto& m = models->v[index];
  info->pi0 = m.pi0;
  info->null_sigma = m.null_sigma;
  info->nonnull_mu = m.nonnull_mu;
  info->nonnull_sigma = m.nonnull_sigma;
  info->power = m.power;
  info->null_mode = m.null_mode == sfdr::NullMode::theoretical ? SFDR_NULL_THEORETICAL
                                                               : SFDR_NULL_EMPIRICAL;
  info->converged = m.converged ? 1 : 0;
  info->degenerate = m.degenerate ? 1 : 0;
  info->loglik = m.loglik;
  info->iterations = m.iterations;
  return SFDR_OK;
}

const char* sfdr_models_study_id(const sfdr_models* models, size_t index) {
  if (!models || index >= models->v.size()) return nullptr;
  return models->v[index].study_id.c_str();
}

void sfdr_models_free(sfdr_models* models) { delete models; }

/* clustering */

void sfdr_cluster_options_default(sfdr_cluster_options* opts) {
  if (!opts) return;
  const sfdr::ClusterOptions d;
  opts->bootstrap = d.bootstrap;
  opts->edge_threshold = d.edge_threshold;
  opts->seed = d.seed;
  opts->restarts = d.restarts;
  opts->em_max_iter = d.em.max_iter;
  opts->em_rel_tol = d.em.rel_tol;
}

sfdr_status sfdr_cluster_studies(const sfdr_matrix* z, const sfdr_models* models,
                                 const sfdr_cluster_options* opts, sfdr_clustering** out) {
  SFDR_REQUIRE_PTR(z);
  SFDR_REQUIRE_PTR(models);
  SFDR_REQUIRE_PTR(out);
  return guarded([&] {
    sfdr_cluster_options o;
    sfdr_cluster_options_default(&o);
    if (opts) o = *opts;
    check_models_match(z->m, models->v);
    const auto lik = sfdr::study_log_likelihoods(models->v, z->m);
    auto h = std::make_unique<sfdr_clustering>();
    h->c = sfdr::cluster_studies(models->v, lik, to_cluster_options(o));
    *out = h.release();
  });
}

sfdr_status sfdr_clustering_load(const char* path, sfdr_clustering** out) {
  SFDR_REQUIRE_PTR(path);
  SFDR_REQUIRE_PTR(out);
  return guarded([&] {
    auto h = std::make_unique<sfdr_clustering>();
    h->c = sfdr::clustering_from_json(sfdr::read_json(path));
    *out = h.release();
  });
}

sfdr_status sfdr_clustering_save(const sfdr_clustering* clustering, const char* path) {
  SFDR_REQUIRE_PTR(clustering);
  SFDR_REQUIRE_PTR(path);
  return guarded([&] { sfdr::write_json(path, sfdr::to_json(clustering->c)); });
}

sfdr_status sfdr_clustering_to_json(const sfdr_clustering* clustering, char** json) {
  SFDR_REQUIRE_PTR(clustering);
  SFDR_REQUIRE_PTR(json);
  return guarded([&] { *json = dup_string(sfdr::to_json(clustering->c).dump(2)); });
}

sfdr_status sfdr_clustering_count(const sfdr_clustering* clustering, size_t* clusters) {
  SFDR_REQUIRE_PTR(clustering);
  SFDR_REQUIRE_PTR(clusters);
  *clusters = clustering->c.clusters.size();
  return SFDR_OK;
}

sfdr_status sfdr_clustering_labels(const sfdr_clustering* clustering, size_t* labels,
                                   size_t capacity, size_t* m) {
  SFDR_REQUIRE_PTR(clustering);
  const auto& c = clustering->c;
  if (m) *m = c.m();
  if (labels) {
    for (size_t k = 0; k < c.clusters.size(); ++k) {
      for (size_t s : c.clusters[k]) {
        if (s < capacity) labels[s] = k;
      }
    }
  }
  return SFDR_OK;
}

void sfdr_clustering_free(sfdr_clustering* clustering) { delete clustering; }

/* fdr tables */

void sfdr_screen_options_default(sfdr_screen_options* opts) {
  if (!opts) return;
  const sfdr::ScreenOptions d;
  opts->k_min = 1;
  opts->k_max = 1;
  opts->n_h = d.n_h;
  opts->cutoff = d.cutoff;
  opts->order_by_power = 0;
  opts->em_max_iter = d.em.max_iter;
  opts->em_rel_tol = d.em.rel_tol;
  sfdr_cluster_options_default(&opts->cluster);
}

sfdr_status sfdr_screen(const sfdr_matrix* z, const sfdr_models* models,
                        const sfdr_clustering* clustering, const sfdr_screen_options* opts,
                        sfdr_fdr_table** out, char** report_json) {
  SFDR_REQUIRE_PTR(z);
  SFDR_REQUIRE_PTR(models);
  SFDR_REQUIRE_PTR(opts);
  SFDR_REQUIRE_PTR(out);
  return guarded([&] {
    check_models_match(z->m, models->v);
    auto so = to_screen_options(*opts);
    if (clustering) {
      sfdr::require(clustering->c.study_ids == z->m.study_ids,
                    "clustering study ids do not match the matrix");
      so.clustering = clustering->c;
    }
    auto result = sfdr::screen_with_models(z->m, models->v, so);
    std::string report;
    if (report_json) report = sfdr::screen_report(result).dump(2);
    auto h = std::make_unique<sfdr_fdr_table>();
    h->t = std::move(result.table);
    if (report_json) *report_json = dup_string(report);
    *out = h.release();
  });
}

sfdr_status sfdr_screen_ind(const sfdr_matrix* z, const sfdr_models* models, int k_min, int k_max,
                            sfdr_fdr_table** out) {
  SFDR_REQUIRE_PTR(z);
  SFDR_REQUIRE_PTR(models);
  SFDR_REQUIRE_PTR(out);
  return guarded([&] {
    check_models_match(z->m, models->v);
    auto h = std::make_unique<sfdr_fdr_table>();
    h->t = sfdr::screen_ind(z->m, models->v, k_min, k_max);
    *out = h.release();
  });
}

sfdr_status sfdr_repfdr_ub(const sfdr_matrix* z, const sfdr_models* models,
                           const sfdr_screen_options* opts, sfdr_fdr_table** out,
                           char** report_json) {
  SFDR_REQUIRE_PTR(z);
  SFDR_REQUIRE_PTR(models);
  SFDR_REQUIRE_PTR(opts);
  SFDR_REQUIRE_PTR(out);
  return guarded([&] {
    check_models_match(z->m, models->v);
    const auto so = to_screen_options(*opts);
    auto result = sfdr::repfdr_ub(z->m, models->v, so.k_min, so.k_max, so.n_h, so.order_by_power,
                                  so.em);
    result.table.cutoff = so.cutoff;
    std::string report;
    if (report_json) {
      sfdr::Json j{{"method", "repfdr_ub"},
                   {"k_min", so.k_min},
                   {"k_max", so.k_max},
                   {"cutoff", so.cutoff},
                   {"models", sfdr::models_to_json(models->v).at("models")},
                   {"config_em", sfdr::to_json(result.state, z->m.study_ids)}};
      report = j.dump(2);
    }
    auto h = std::make_unique<sfdr_fdr_table>();
    h->t = std::move(result.table);
    if (report_json) *report_json = dup_string(report);
    *out = h.release();
  });
}

sfdr_status sfdr_fdr_table_dims(const sfdr_fdr_table* table, size_t* genes, int* k_min,
                                int* k_max) {
  SFDR_REQUIRE_PTR(table);
  if (genes) *genes = table->t.gene_ids.size();
  if (k_min) *k_min = table->t.k_min;
  if (k_max) *k_max = table->t.k_max;
  return SFDR_OK;
}

sfdr_status sfdr_fdr_table_method(const sfdr_fdr_table* table, sfdr_fdr_method* method) {
  SFDR_REQUIRE_PTR(table);
  SFDR_REQUIRE_PTR(method);
  switch (table->t.method) {
    case sfdr::FdrMethod::screen: *method = SFDR_METHOD_SCREEN; break;
    case sfdr::FdrMethod::screen_ind: *method = SFDR_METHOD_SCREEN_IND; break;
    case sfdr::FdrMethod::repfdr_ub: *method = SFDR_METHOD_REPFDR_UB; break;
  }
  return SFDR_OK;
}

sfdr_status sfdr_fdr_table_value(const sfdr_fdr_table* table, int k, size_t gene, double* value) {
  SFDR_REQUIRE_PTR(table);
  SFDR_REQUIRE_PTR(value);
  return guarded([&] {
    const auto& col = table->t.at_k(k);
    if (gene >= col.size()) sfdr::fail(sfdr::ErrorCode::out_of_range, "gene index out of range");
    *value = col[gene];
  });
}

const char* sfdr_fdr_table_gene_id(const sfdr_fdr_table* table, size_t gene) {
  if (!table || gene >= table->t.gene_ids.size()) return nullptr;
  return table->t.gene_ids[gene].c_str();
}

sfdr_status sfdr_fdr_table_select(const sfdr_fdr_table* table, int k, double cutoff,
                                  size_t* indices, size_t capacity, size_t* count) {
  SFDR_REQUIRE_PTR(table);
  SFDR_REQUIRE_PTR(count);
  return guarded([&] {
    const auto sel = sfdr::select_at_cutoff(table->t.at_k(k), cutoff);
    *count = sel.size();
    if (indices) {
      for (size_t i = 0; i < sel.size() && i < capacity; ++i) indices[i] = sel[i];
    }
  });
}

sfdr_status sfdr_fdr_table_save(const sfdr_fdr_table* table, const char* path) {
  SFDR_REQUIRE_PTR(table);
  SFDR_REQUIRE_PTR(path);
  return guarded([&] { sfdr::write_fdr_table(std::filesystem::path(path), table->t); });
}

void sfdr_fdr_table_free(sfdr_fdr_table* table) { delete table; }

/* baselines */

sfdr_status sfdr_baseline_run(const sfdr_matrix* data, const sfdr_models* models,
                              sfdr_baseline_method method, double level, sfdr_baseline** out) {
  SFDR_REQUIRE_PTR(data);
  SFDR_REQUIRE_PTR(out);
  return guarded([&] {
    auto h = std::make_unique<sfdr_baseline>();
    switch (method) {
      case SFDR_BASELINE_FISHER:
        h->r = sfdr::fisher_meta(data->m, level > 0 ? level : sfdr::kFisherLevel);
        break;
      case SFDR_BASELINE_BH_COUNT:
        h->r = sfdr::bh_count(data->m, level > 0 ? level : sfdr::kBhCountLevel);
        break;
      case SFDR_BASELINE_EXP_COUNT:
        sfdr::require(models != nullptr, "exp_count needs fitted models");
        check_models_match(data->m, models->v);
        h->r = sfdr::exp_count(models->v, data->m);
        break;
      default:
        sfdr::fail(sfdr::ErrorCode::invalid_argument, "unknown baseline method");
    }
    *out = h.release();
  });
}

sfdr_status sfdr_baseline_statistic(const sfdr_baseline* result, size_t gene, double* value) {
  SFDR_REQUIRE_PTR(result);
  SFDR_REQUIRE_PTR(value);
  if (gene >= result->r.statistic.size()) {
    return set_error(SFDR_ERR_OUT_OF_RANGE, "gene index out of range");
  }
  *value = result->r.statistic[gene];
  return SFDR_OK;
}

sfdr_status sfdr_baseline_save(const sfdr_baseline* result, const char* path) {
  SFDR_REQUIRE_PTR(result);
  SFDR_REQUIRE_PTR(path);
  return guarded([&] {
    std::ostringstream os;
    sfdr::write_baseline(os, result->r);
    write_text(path, os.str());
  });
}

void sfdr_baseline_free(sfdr_baseline* result) { delete result; }

sfdr_status sfdr_bh(const double* pvals, size_t n, double* qvals) {
  if (n > 0) {
    SFDR_REQUIRE_PTR(pvals);
    SFDR_REQUIRE_PTR(qvals);
  }
  return guarded([&] {
    const auto q = sfdr::bh_procedure({pvals, n});
    std::copy(q.begin(), q.end(), qvals);
  });
}

/* simulation */

void sfdr_sim_options_default(sfdr_sim_options* opts) {
  if (!opts) return;
  opts->scenario = "s1";
  opts->n = 5000;
  opts->m = 20;
  opts->x = 1000.0;
  opts->clusters = 1;
  opts->r = 0.8;
  opts->seed = 1;
}

namespace {
sfdr::BenchSpec to_spec(const sfdr_sim_options& o) {
  sfdr::require(o.scenario != nullptr, "scenario is NULL");
  sfdr::BenchSpec spec;
  spec.scenario = o.scenario;
  spec.n = o.n;
  spec.m = o.m;
  spec.x = o.x;
  spec.clusters = o.clusters;
  spec.r = o.r;
  return spec;
}
}  // namespace

sfdr_status sfdr_simulate(const sfdr_sim_options* opts, sfdr_sim** out) {
  SFDR_REQUIRE_PTR(opts);
  SFDR_REQUIRE_PTR(out);
  return guarded([&] {
    auto h = std::make_unique<sfdr_sim>();
    h->s = sfdr::simulate(to_spec(*opts), opts->seed);
    *out = h.release();
  });
}

sfdr_status sfdr_sim_data(const sfdr_sim* sim, sfdr_matrix** out) {
  SFDR_REQUIRE_PTR(sim);
  SFDR_REQUIRE_PTR(out);
  return guarded([&] {
    auto h = std::make_unique<sfdr_matrix>();
    h->m = sim->s.data;
    *out = h.release();
  });
}

sfdr_status sfdr_sim_save_truth(const sfdr_sim* sim, const char* path) {
  SFDR_REQUIRE_PTR(sim);
  SFDR_REQUIRE_PTR(path);
  return guarded([&] {
    std::ostringstream os;
    sfdr::write_truth(os, sim->s);
    write_text(path, os.str());
  });
}

void sfdr_sim_free(sfdr_sim* sim) { delete sim; }

sfdr_status sfdr_truth_load(const char* path, sfdr_truth** out) {
  SFDR_REQUIRE_PTR(path);
  SFDR_REQUIRE_PTR(out);
  return guarded([&] {
    std::ifstream in(path);
    if (!in) sfdr::fail(sfdr::ErrorCode::io, std::string("cannot open '") + path + "'");
    auto h = std::make_unique<sfdr_truth>();
    h->counts = sfdr::read_truth_counts(in, &h->gene_ids);
    for (size_t i = 0; i < h->gene_ids.size(); ++i) h->index.emplace(h->gene_ids[i], i);
    *out = h.release();
  });
}

sfdr_status sfdr_truth_evaluate(const sfdr_truth* truth, const char* const* selected, size_t count,
                                int k, sfdr_eval_score* score) {
  SFDR_REQUIRE_PTR(truth);
  SFDR_REQUIRE_PTR(score);
  if (count > 0) SFDR_REQUIRE_PTR(selected);
  return guarded([&] {
    std::vector<size_t> idx;
    idx.reserve(count);
    for (size_t s = 0; s < count; ++s) {
      sfdr::require(selected[s] != nullptr, "selected gene id is NULL");
      const auto it = truth->index.find(selected[s]);
      if (it == truth->index.end()) {
        sfdr::fail(sfdr::ErrorCode::invalid_argument,
                   std::string("selected gene '") + selected[s] + "' is not in the truth matrix");
      }
      idx.push_back(it->second);
    }
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    const auto e = sfdr::evaluate(idx, truth->counts, k);
    score->k = e.k;
    score->jaccard = e.jaccard;
    score->fdp = e.fdp;
    score->n_selected = e.n_selected;
  });
}

void sfdr_truth_free(sfdr_truth* truth) { delete truth; }

void sfdr_bench_options_default(sfdr_bench_options* opts) {
  if (!opts) return;
  sfdr_sim_options_default(&opts->sim);
  const sfdr::BenchSpec d;
  opts->seeds = nullptr;
  opts->n_seeds = 0;
  opts->methods = nullptr;
  opts->k_min = d.k_min;
  opts->k_max = d.k_max;
  opts->cutoff = d.cutoff;
  opts->n_h = d.n_h;
  opts->bootstrap = d.bootstrap;
  opts->edge_threshold = d.edge_threshold;
  opts->null_mode = SFDR_NULL_THEORETICAL;
}

sfdr_status sfdr_bench_run(const sfdr_bench_options* opts, char** csv) {
  SFDR_REQUIRE_PTR(opts);
  SFDR_REQUIRE_PTR(csv);
  if (opts->n_seeds > 0) SFDR_REQUIRE_PTR(opts->seeds);
  return guarded([&] {
    sfdr::BenchSpec spec = to_spec(opts->sim);
    spec.seeds.assign(opts->seeds, opts->seeds + opts->n_seeds);
    if (opts->methods && *opts->methods) {
      spec.methods.clear();
      std::stringstream ss(opts->methods);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (!item.empty()) spec.methods.push_back(sfdr::parse_bench_method(item));
      }
    }
    spec.k_min = opts->k_min;
    spec.k_max = opts->k_max;
    spec.cutoff = opts->cutoff;
    spec.n_h = opts->n_h;
    spec.bootstrap = opts->bootstrap;
    spec.edge_threshold = opts->edge_threshold;
    spec.null_mode = to_null_mode(opts->null_mode);
    const auto rows = sfdr::run_benchmark(spec);
    std::ostringstream os;
    sfdr::write_bench_csv(os, rows);
    *csv = dup_string(os.str());
  });
}

}  // extern "C"
