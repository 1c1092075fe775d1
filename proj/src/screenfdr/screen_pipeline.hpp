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
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "screenfdr/config_em.hpp"
#include "screenfdr/fdr_table.hpp"
#include "screenfdr/likelihood.hpp"
#include "screenfdr/stats_matrix.hpp"
#include "screenfdr/study_cluster.hpp"
#include "screenfdr/two_groups.hpp"

namespace sfdr {

// Per-gene posterior distribution of the number of non-null studies inside one
// cluster: v[i * (size + 1) + c] = P(exactly c non-nulls in the cluster | Z_i).
struct ClusterCountDistribution {
  std::vector<std::size_t> studies;
  std::size_t n = 0;
  std::vector<double> v;
  bool exact = true;

  std::size_t size() const { return studies.size(); }
  std::size_t width() const { return studies.size() + 1; }
  double at(std::size_t gene, std::size_t count) const { return v[gene * width() + count]; }
};

// Exact states sum configuration posteriors by count. Pruned states take
// differences of the cumulative upper bound on P(count <= c | Z), so the
// unaccounted mass sits in the lowest counts and rows may sum to more than 1.
// Convolving such rows keeps every merged fdr_k an upper bound.
ClusterCountDistribution cluster_count_distribution(const ConfigState& state,
                                                    const StudyLogLik& lik);

// Posterior count distribution of a single study under its two-groups model.
ClusterCountDistribution singleton_count_distribution(const StudyLogLik& lik, std::size_t study);

// Values are clipped at 1 only when every cluster is exact.
FdrTable merge_clusters_range(std::span<const ClusterCountDistribution> clusters,
                              const std::vector<std::string>& gene_ids, int k_min, int k_max);

std::vector<double> merge_clusters(std::span<const ClusterCountDistribution> clusters, int k);

// P(fewer than d clusters have at least ceil(delta * |C|) non-nulls | Z).
std::vector<double> fdr_delta_d(std::span<const ClusterCountDistribution> clusters,
                                double delta, int d);

struct ScreenOptions {
  int k_min = 1;
  int k_max = 1;
  std::size_t n_h = kDefaultNH;
  ClusterOptions cluster;
  EmOptions em;
  bool order_by_power = false;
  double cutoff = kDefaultFdrCutoff;
  // Skips study clustering when set.
  std::optional<StudyClustering> clustering;
};

struct StageTimes {
  double fit_seconds = 0.0;
  double cluster_seconds = 0.0;
  double em_seconds = 0.0;
  double merge_seconds = 0.0;
  double total_seconds = 0.0;
};

struct ScreenResult {
  FdrTable table;
  std::vector<TwoGroupsModel> models;
  StudyClustering clustering;
  std::vector<ConfigState> cluster_states;
  StageTimes times;
};

// Fits a two-groups model to |z| of every study.
std::vector<TwoGroupsModel> fit_models(const StatsMatrix& z, const NormixOptions& opts = {});

ScreenResult screen(const StatsMatrix& z, const ScreenOptions& opts,
                    const NormixOptions& normix = {});

ScreenResult screen_with_models(const StatsMatrix& z, std::vector<TwoGroupsModel> models,
                                const ScreenOptions& opts);

// Independence baseline: every study treated as its own cluster.
FdrTable screen_ind(const StatsMatrix& z, std::span<const TwoGroupsModel> models, int k_min,
                    int k_max);

struct RepfdrResult {
  FdrTable table;
  ConfigState state;
};

// Restricted EM over all studies with the cumulative upper bound.
RepfdrResult repfdr_ub(const StatsMatrix& z, std::span<const TwoGroupsModel> models, int k_min,
                       int k_max, std::size_t n_h = kDefaultNH, bool order_power = false,
                       const EmOptions& em = {});

}  // namespace sfdr
