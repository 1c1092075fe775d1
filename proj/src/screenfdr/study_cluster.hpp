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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "screenfdr/community.hpp"
#include "screenfdr/config_em.hpp"
#include "screenfdr/likelihood.hpp"
#include "screenfdr/two_groups.hpp"

namespace sfdr {

inline constexpr int kDefaultBootstrap = 100;
inline constexpr double kDefaultEdgeThreshold = 0.1;

struct PairFit {
  double a_ij = 0.0;             // estimated P(non-null in both studies)
  std::vector<double> probs;     // configurations 00, 10, 01, 11 (bit 0 = study i)
  EmResult em;
};

// Four-configuration EM over studies i and j, started from the product of the
// marginal non-null rates.
PairFit pairwise_joint_nonnull(const StudyLogLik& lik, std::size_t i, std::size_t j,
                               const EmOptions& opts = {.accelerate = true});

// phi-coefficient of two binary indicators with marginals a_i, a_j and joint
// a_ij, clamped to [-1, 1]. Returns 0 when either marginal is 0 or 1.
double study_correlation(double a_i, double a_j, double a_ij);

struct BootstrapOptions {
  int replicates = kDefaultBootstrap;  // 0 uses the full-data estimate only
  std::uint64_t seed = 1;
  EmOptions em{.accelerate = true};
};

// Mean correlation over bootstrap subsamples of ceil(n/2) genes drawn with
// replacement. Only a_ij is re-estimated; a_i and a_j stay fixed.
double bootstrap_correlation(const StudyLogLik& lik, std::size_t i, std::size_t j, double a_i,
                             double a_j, const BootstrapOptions& opts = {});

// Seed of the bootstrap stream for pair (i, j), i < j.
std::uint64_t pair_seed(std::uint64_t seed, std::size_t i, std::size_t j);

struct StudyClustering {
  std::vector<std::string> study_ids;
  std::vector<double> correlations;  // m x m, row-major, unit diagonal
  double edge_threshold = kDefaultEdgeThreshold;
  Partition clusters;                // study indices

  std::size_t m() const { return study_ids.size(); }
  double r(std::size_t i, std::size_t j) const { return correlations[i * m() + j]; }
};

StudyClustering detect_communities(std::span<const double> correlations,
                                   const std::vector<std::string>& study_ids,
                                   double edge_threshold = kDefaultEdgeThreshold,
                                   const InfomapOptions& opts = {});

struct ClusterOptions {
  int bootstrap = kDefaultBootstrap;
  double edge_threshold = kDefaultEdgeThreshold;
  std::uint64_t seed = 1;
  EmOptions em{.accelerate = true};
  int restarts = 10;
};

// Correlation network from pairwise fits, then community detection.
StudyClustering cluster_studies(std::span<const TwoGroupsModel> models, const StudyLogLik& lik,
                                const ClusterOptions& opts = {});

// Every study in its own cluster.
StudyClustering singleton_clustering(const std::vector<std::string>& study_ids);

}  // namespace sfdr
