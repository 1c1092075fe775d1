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
#include "screenfdr/study_cluster.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "screenfdr/error.hpp"
#include "screenfdr/parallel.hpp"

namespace sfdr {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Row-normalized likelihoods of the four pair configurations.
std::vector<double> pair_likelihoods(const StudyLogLik& lik, std::size_t i, std::size_t j) {
  std::vector<double> out(lik.n * 4);
  for (std::size_t g = 0; g < lik.n; ++g) {
    const double a0 = lik.lf0(g, i), a1 = lik.lf1(g, i);
    const double b0 = lik.lf0(g, j), b1 = lik.lf1(g, j);
    const std::array<double, 4> v{a0 + b0, a1 + b0, a0 + b1, a1 + b1};
    const double mx = *std::max_element(v.begin(), v.end());
    for (std::size_t h = 0; h < 4; ++h) {
      out[g * 4 + h] = std::isfinite(mx) ? std::exp(v[h] - mx) : 0.0;
    }
  }
  return out;
}

void check_pair(const StudyLogLik& lik, std::size_t i, std::size_t j) {
  require(i < lik.m && j < lik.m, "study index out of range");
  require(i != j, "pairwise fit needs two distinct studies");
}

}  // namespace

PairFit pairwise_joint_nonnull(const StudyLogLik& lik, std::size_t i, std::size_t j,
                               const EmOptions& opts) {
  check_pair(lik, i, j);
  const double ai = 1.0 - lik.pi0[i], aj = 1.0 - lik.pi0[j];
  const std::array<double, 4> init{(1 - ai) * (1 - aj), ai * (1 - aj), (1 - ai) * aj, ai * aj};
  const auto pl = pair_likelihoods(lik, i, j);
  PairFit fit;
  fit.em = em_restricted(pl, lik.n, init, opts);
  fit.probs = fit.em.probs;
  fit.a_ij = std::clamp(fit.probs[3], 0.0, 1.0);
  return fit;
}

double study_correlation(double a_i, double a_j, double a_ij) {
  if (!(a_i > 0.0 && a_i < 1.0 && a_j > 0.0 && a_j < 1.0)) return 0.0;
  const double num = a_ij - a_i * a_j;
  const double den = std::sqrt((a_i * (1.0 - a_i)) * (a_j * (1.0 - a_j)));
  return std::clamp(num / den, -1.0, 1.0);
}

std::uint64_t pair_seed(std::uint64_t seed, std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  return splitmix64(splitmix64(seed) ^ splitmix64((static_cast<std::uint64_t>(i) << 32) | j));
}

double bootstrap_correlation(const StudyLogLik& lik, std::size_t i, std::size_t j, double a_i,
                             double a_j, const BootstrapOptions& opts) {
  check_pair(lik, i, j);
  require(opts.replicates >= 0, "bootstrap replicates must be non-negative");
  const auto full = pairwise_joint_nonnull(lik, i, j, opts.em);
  if (opts.replicates == 0 || lik.n == 0) return study_correlation(a_i, a_j, full.a_ij);

  const auto pl = pair_likelihoods(lik, i, j);
  const std::size_t half = (lik.n + 1) / 2;
  std::mt19937_64 rng(pair_seed(opts.seed, i, j));
  std::uniform_int_distribution<std::size_t> pick(0, lik.n - 1);
  const std::array<double, 4> init{(1 - a_i) * (1 - a_j), a_i * (1 - a_j), (1 - a_i) * a_j,
                                   a_i * a_j};
  std::vector<double> sample(half * 4);
  double total = 0.0;
  for (int b = 0; b < opts.replicates; ++b) {
    for (std::size_t s = 0; s < half; ++s) {
      const std::size_t g = pick(rng);
      std::copy_n(pl.begin() + static_cast<std::ptrdiff_t>(g * 4), 4,
                  sample.begin() + static_cast<std::ptrdiff_t>(s * 4));
    }
    const auto em = em_restricted(sample, half, init, opts.em);
    total += study_correlation(a_i, a_j, std::clamp(em.probs[3], 0.0, 1.0));
  }
  return total / opts.replicates;
}

StudyClustering detect_communities(std::span<const double> correlations,
                                   const std::vector<std::string>& study_ids,
                                   double edge_threshold, const InfomapOptions& opts) {
  const std::size_t m = study_ids.size();
  require(correlations.size() == m * m, "correlation matrix must be m x m");
  require(edge_threshold > 0.0 && edge_threshold < 1.0, "edge threshold must lie in (0,1)");
  Graph g;
  g.n = m;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (std::abs(correlations[i * m + j]) >= edge_threshold) g.edges.emplace_back(i, j);
    }
  }
  StudyClustering out;
  out.study_ids = study_ids;
  out.correlations.assign(correlations.begin(), correlations.end());
  out.edge_threshold = edge_threshold;
  out.clusters = infomap(g, opts);
  return out;
}

StudyClustering cluster_studies(std::span<const TwoGroupsModel> models, const StudyLogLik& lik,
                                const ClusterOptions& opts) {
  const std::size_t m = lik.m;
  require(models.size() == m, "one model per study is required");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
  }
  std::vector<double> r(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) r[i * m + i] = 1.0;
  BootstrapOptions bo;
  bo.replicates = opts.bootstrap;
  bo.seed = opts.seed;
  bo.em = opts.em;
  parallel_tasks(pairs.size(), [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    const double v = bootstrap_correlation(lik, i, j, 1.0 - models[i].pi0, 1.0 - models[j].pi0, bo);
    r[i * m + j] = v;
    r[j * m + i] = v;
  });
  std::vector<std::string> ids;
  ids.reserve(m);
  for (const auto& model : models) ids.push_back(model.study_id);
  InfomapOptions io;
  io.seed = opts.seed;
  io.restarts = opts.restarts;
  return detect_communities(r, ids, opts.edge_threshold, io);
}

StudyClustering singleton_clustering(const std::vector<std::string>& study_ids) {
  const std::size_t m = study_ids.size();
  StudyClustering out;
  out.study_ids = study_ids;
  out.correlations.assign(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    out.correlations[i * m + i] = 1.0;
    out.clusters.push_back({i});
  }
  return out;
}

}  // namespace sfdr
