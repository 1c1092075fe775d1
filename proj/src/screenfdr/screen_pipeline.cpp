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
#include "screenfdr/screen_pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "screenfdr/error.hpp"
#include "screenfdr/indep_dp.hpp"
#include "screenfdr/parallel.hpp"

namespace sfdr {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_k_range(int k_min, int k_max, std::size_t m) {
  if (k_min < 1 || k_max < k_min || static_cast<std::size_t>(k_max) > m) {
    fail(ErrorCode::out_of_range, "k range [" + std::to_string(k_min) + "," +
                                      std::to_string(k_max) + "] outside [1," +
                                      std::to_string(m) + "]");
  }
}

void check_clusters(std::span<const ClusterCountDistribution> clusters) {
  require(!clusters.empty(), "merge needs at least one cluster");
  const std::size_t n = clusters.front().n;
  for (const auto& c : clusters) {
    require(c.n == n, "clusters disagree on gene count");
    require(c.size() > 0, "empty cluster");
    require(c.v.size() == c.n * c.width(), "cluster distribution has inconsistent dimensions");
  }
}

std::size_t total_studies(std::span<const ClusterCountDistribution> clusters) {
  std::size_t m = 0;
  for (const auto& c : clusters) m += c.size();
  return m;
}

std::vector<std::size_t> cluster_order(const std::vector<std::size_t>& members,
                                       std::span<const TwoGroupsModel> models, bool by_power) {
  std::vector<std::size_t> order = members;
  std::sort(order.begin(), order.end());
  if (by_power) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return models[a].power > models[b].power;
    });
  }
  return order;
}

// A lone study keeps the prior of its own two-groups model.
ConfigState singleton_state(const StudyLogLik& lik, std::size_t study, std::size_t n_h) {
  ConfigState state;
  state.studies = {study};
  state.n_h = n_h;
  state.configs = {0, 1};
  state.probs = {lik.pi0[study], 1.0 - lik.pi0[study]};
  return state;
}

}  // namespace

ClusterCountDistribution cluster_count_distribution(const ConfigState& state,
                                                    const StudyLogLik& lik) {
  require(state.l() > 0, "cluster state has no studies");
  ClusterCountDistribution out;
  out.studies = state.studies;
  out.n = lik.n;
  out.exact = state.exact();
  const std::size_t w = out.width();
  out.v.assign(out.n * w, 0.0);

  if (out.exact) {
    const std::size_t k = state.configs.size();
    std::vector<int> counts(k);
    for (std::size_t h = 0; h < k; ++h) counts[h] = popcount(state.configs[h]);
    const auto log_l = config_log_likelihoods(lik, state.studies, state.configs);
    parallel_blocks(out.n, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        const double* row = log_l.data() + i * k;
        const double mx = *std::max_element(row, row + k);
        double* dst = out.v.data() + i * w;
        double den = 0.0;
        for (std::size_t h = 0; h < k; ++h) {
          const double p = state.probs[h] * std::exp(row[h] - mx);
          dst[counts[h]] += p;
          den += p;
        }
        if (den > 0) {
          for (std::size_t c = 0; c < w; ++c) dst[c] /= den;
        }
      }
    });
    return out;
  }

  parallel_blocks(out.n, [&](std::size_t b, std::size_t e) {
    std::vector<double> bound(w);
    for (std::size_t i = b; i < e; ++i) {
      count_cdf_upper_bound(state, lik, i, bound);
      double* dst = out.v.data() + i * w;
      double prev = 0.0;
      for (std::size_t c = 0; c < w; ++c) {
        const double g = c + 1 == w ? std::max(1.0, prev) : std::max(bound[c], prev);
        dst[c] = g - prev;
        prev = g;
      }
    }
  });
  return out;
}

ClusterCountDistribution singleton_count_distribution(const StudyLogLik& lik, std::size_t study) {
  require(study < lik.m, "study index out of range");
  ClusterCountDistribution out;
  out.studies = {study};
  out.n = lik.n;
  out.v.resize(out.n * 2);
  const double p0 = lik.pi0[study];
  for (std::size_t i = 0; i < lik.n; ++i) {
    const double a = std::log(p0) + lik.lf0(i, study);
    const double b = std::log1p(-p0) + lik.lf1(i, study);
    const double mx = std::max(a, b);
    const double w0 = std::exp(a - mx), w1 = std::exp(b - mx);
    out.v[2 * i] = w0 / (w0 + w1);
    out.v[2 * i + 1] = w1 / (w0 + w1);
  }
  return out;
}

FdrTable merge_clusters_range(std::span<const ClusterCountDistribution> clusters,
                              const std::vector<std::string>& gene_ids, int k_min, int k_max) {
  check_clusters(clusters);
  const std::size_t n = clusters.front().n;
  check_k_range(k_min, k_max, total_studies(clusters));
  require(gene_ids.size() == n, "gene id count does not match cluster rows");
  FdrTable table;
  table.gene_ids = gene_ids;
  table.k_min = k_min;
  table.k_max = k_max;
  table.method = FdrMethod::screen;
  table.values.assign(static_cast<std::size_t>(k_max - k_min + 1), std::vector<double>(n));
  const auto width = static_cast<std::size_t>(k_max);  // counts 0..k_max-1
  const bool all_exact = std::all_of(clusters.begin(), clusters.end(),
                                     [](const ClusterCountDistribution& c) { return c.exact; });
  parallel_blocks(n, [&](std::size_t b, std::size_t e) {
    std::vector<double> acc(width), next(width);
    for (std::size_t i = b; i < e; ++i) {
      std::fill(acc.begin(), acc.end(), 0.0);
      acc[0] = 1.0;
      for (const auto& cl : clusters) {
        const double* v = cl.v.data() + i * cl.width();
        for (std::size_t c = 0; c < width; ++c) {
          double s = 0.0;
          const std::size_t top = std::min(c, cl.size());
          for (std::size_t cc = 0; cc <= top; ++cc) s += v[cc] * acc[c - cc];
          next[c] = s;
        }
        acc.swap(next);
      }
      double cum = 0.0;
      for (int c = 0; c < k_max; ++c) {
        cum += acc[static_cast<std::size_t>(c)];
        const int k = c + 1;
        if (k >= k_min) {
          table.values[static_cast<std::size_t>(k - k_min)][i] = all_exact ? std::min(1.0, cum) : cum;
        }
      }
    }
  });
  return table;
}

std::vector<double> merge_clusters(std::span<const ClusterCountDistribution> clusters, int k) {
  check_clusters(clusters);
  std::vector<std::string> ids(clusters.front().n);
  return merge_clusters_range(clusters, ids, k, k).values.front();
}

std::vector<double> fdr_delta_d(std::span<const ClusterCountDistribution> clusters, double delta,
                                int d) {
  check_clusters(clusters);
  require(delta > 0.0 && delta <= 1.0, "delta must lie in (0,1]");
  require(d >= 1, "d must be at least 1");
  const std::size_t n = clusters.front().n;
  const std::size_t n_clusters = clusters.size();
  std::vector<double> out(n, 1.0);
  if (static_cast<std::size_t>(d) > n_clusters) return out;

  std::vector<std::size_t> threshold(n_clusters);
  for (std::size_t j = 0; j < n_clusters; ++j) {
    const double t = std::ceil(delta * static_cast<double>(clusters[j].size()) - 1e-12);
    threshold[j] = std::max<std::size_t>(1, static_cast<std::size_t>(t));
  }
  const auto width = static_cast<std::size_t>(d);
  parallel_blocks(n, [&](std::size_t b, std::size_t e) {
    std::vector<double> acc(width);
    for (std::size_t i = b; i < e; ++i) {
      std::fill(acc.begin(), acc.end(), 0.0);
      acc[0] = 1.0;
      for (std::size_t j = 0; j < n_clusters; ++j) {
        const auto& cl = clusters[j];
        double below = 0.0;
        for (std::size_t c = 0; c < threshold[j]; ++c) below += cl.at(i, c);
        const double q = std::clamp(1.0 - below, 0.0, 1.0);
        for (std::size_t c = width - 1; c > 0; --c) acc[c] = (1.0 - q) * acc[c] + q * acc[c - 1];
        acc[0] *= 1.0 - q;
      }
      out[i] = std::min(1.0, std::accumulate(acc.begin(), acc.end(), 0.0));
    }
  });
  return out;
}

std::vector<TwoGroupsModel> fit_models(const StatsMatrix& z, const NormixOptions& opts) {
  require(z.scale == Scale::zscore, "model fitting needs a z-score matrix");
  std::vector<TwoGroupsModel> models(z.n_studies());
  parallel_tasks(z.n_studies(), [&](std::size_t j) {
    auto col = z.column(j);
    for (double& v : col) v = std::fabs(v);
    try {
      models[j] = fit_normix(col, opts).model;
    } catch (const Error& e) {
      throw Error(e.code(), "study '" + z.study_ids[j] + "': " + e.what());
    }
    models[j].study_id = z.study_ids[j];
  });
  return models;
}

ScreenResult screen(const StatsMatrix& z, const ScreenOptions& opts, const NormixOptions& normix) {
  const auto t0 = Clock::now();
  auto models = fit_models(z, normix);
  const double fit_seconds = seconds_since(t0);
  ScreenResult result = screen_with_models(z, std::move(models), opts);
  result.times.fit_seconds = fit_seconds;
  result.times.total_seconds += fit_seconds;
  return result;
}

ScreenResult screen_with_models(const StatsMatrix& z, std::vector<TwoGroupsModel> models,
                                const ScreenOptions& opts) {
  const auto t_start = Clock::now();
  check_k_range(opts.k_min, opts.k_max, z.n_studies());
  ScreenResult result;
  const StudyLogLik lik = study_log_likelihoods(models, z);

  auto t0 = Clock::now();
  if (opts.clustering) {
    result.clustering = *opts.clustering;
    require(result.clustering.m() == z.n_studies(), "clustering does not match study count");
  } else {
    result.clustering = cluster_studies(models, lik, opts.cluster);
  }
  result.times.cluster_seconds = seconds_since(t0);

  std::vector<bool> seen(z.n_studies(), false);
  for (const auto& cl : result.clustering.clusters) {
    require(!cl.empty(), "empty cluster");
    for (std::size_t s : cl) {
      require(s < seen.size() && !seen[s], "clusters must partition the studies");
      seen[s] = true;
    }
  }
  require(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }),
          "clusters must cover every study");

  t0 = Clock::now();
  const auto& clusters = result.clustering.clusters;
  result.cluster_states.resize(clusters.size());
  std::vector<ClusterCountDistribution> dists(clusters.size());
  parallel_tasks(clusters.size(), [&](std::size_t c) {
    if (clusters[c].size() == 1) {
      result.cluster_states[c] = singleton_state(lik, clusters[c].front(), opts.n_h);
    } else {
      const auto order = cluster_order(clusters[c], models, opts.order_by_power);
      result.cluster_states[c] = restricted_em(lik, order, opts.n_h, opts.em);
    }
    dists[c] = cluster_count_distribution(result.cluster_states[c], lik);
  });
  result.times.em_seconds = seconds_since(t0);

  t0 = Clock::now();
  result.table = merge_clusters_range(dists, z.gene_ids, opts.k_min, opts.k_max);
  result.table.cutoff = opts.cutoff;
  result.times.merge_seconds = seconds_since(t0);
  result.models = std::move(models);
  result.times.total_seconds = seconds_since(t_start);
  return result;
}

FdrTable screen_ind(const StatsMatrix& z, std::span<const TwoGroupsModel> models, int k_min,
                    int k_max) {
  const auto lik = study_log_likelihoods(models, z);
  return fdr_independent_range(likelihood_ratios(lik), z.gene_ids, k_min, k_max);
}

RepfdrResult repfdr_ub(const StatsMatrix& z, std::span<const TwoGroupsModel> models, int k_min,
                       int k_max, std::size_t n_h, bool order_power, const EmOptions& em) {
  check_k_range(k_min, k_max, z.n_studies());
  const auto lik = study_log_likelihoods(models, z);
  std::vector<std::size_t> all(z.n_studies());
  std::iota(all.begin(), all.end(), 0);
  const auto order = cluster_order(all, models, order_power);
  RepfdrResult out;
  out.state = restricted_em(lik, order, n_h, em);
  out.table = fdr_upper_bound_range(out.state, lik, z.gene_ids, k_min, k_max);
  return out;
}

}  // namespace sfdr
