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

#include "screenfdr/fdr_table.hpp"
#include "screenfdr/likelihood.hpp"

namespace sfdr {

// Binary study configuration; bit b refers to the b-th study of a ConfigState.
using Config = std::uint64_t;
inline constexpr std::size_t kMaxConfigStudies = 64;
inline constexpr std::size_t kDefaultNH = 512;

inline int popcount(Config h) { return __builtin_popcountll(h); }

// Lexicographic order over (h_1, ..., h_l): the first differing position decides.
bool lex_less(Config a, Config b);

struct EmOptions {
  int max_iter = 500;  // cap on EM map evaluations
  double rel_tol = 1e-8;
  // Squared extrapolation between EM steps. Same fixed points, log-likelihood still
  // non-decreasing, far fewer passes on slowly converging fits.
  bool accelerate = false;
};

struct EmResult {
  std::vector<double> probs;
  std::vector<double> loglik_trace;  // log-likelihood at each visited iterate
  int iterations = 0;
  bool converged = false;
};

// Mixture-weight EM over a fixed set of K configurations. lik is row-major
// n x K with P(Z_i | h) up to a per-gene constant. init must be a probability
// vector; configurations that start at zero stay at zero.
EmResult em_restricted(std::span<const double> lik, std::size_t n,
                       std::span<const double> init, const EmOptions& opts = {});

struct EmRound {
  std::size_t studies = 0;  // state size l after the round
  std::size_t configs = 0;  // configurations the EM ran on
  int iterations = 0;
  bool converged = false;
  double loglik = 0.0;
  std::vector<double> loglik_trace;
};

// Restricted-EM state over the first l studies of an absorption order.
struct ConfigState {
  std::vector<std::size_t> studies;  // global study indices, bit b <-> studies[b]
  std::size_t n_h = kDefaultNH;
  std::vector<Config> configs;
  std::vector<double> probs;
  double coverage = 1.0;         // sum of probs
  double exclusion_bound = 0.0;  // bound on any excluded configuration's probability
  std::vector<EmRound> rounds;

  std::size_t l() const { return studies.size(); }
  // True when no configuration with positive probability was ever pruned.
  bool exact() const { return exclusion_bound == 0.0; }
};

// Row-major n x K matrix of log P(Z_i | h) for the given configurations.
std::vector<double> config_log_likelihoods(const StudyLogLik& lik,
                                           std::span<const std::size_t> studies,
                                           std::span<const Config> configs);

// Unrestricted EM over all 2^l configurations of the given studies, warm-started
// from the product of the per-study marginal priors.
ConfigState initial_state(const StudyLogLik& lik, std::span<const std::size_t> studies,
                          std::size_t n_h, const EmOptions& opts = {});

// Extends every configuration with study `study` (both values), runs the
// restricted EM, rescales by the previous coverage and, when prune is set,
// keeps the top n_h/2 configurations (ties: lexicographically smallest).
ConfigState absorb_study(const ConfigState& state, const StudyLogLik& lik, std::size_t study,
                         bool prune, const EmOptions& opts = {});

// Whole pipeline over the given absorption order. Exact when 2^|order| <= n_h;
// otherwise starts from log2(n_h) - 1 studies and absorbs the rest, pruning
// after every round but the last.
ConfigState restricted_em(const StudyLogLik& lik, std::span<const std::size_t> order,
                          std::size_t n_h, const EmOptions& opts = {});

// Study order by descending power (stable), for the optional reordering.
std::vector<std::size_t> order_by_power(std::span<const double> power);

// bound[c] >= P(|h| <= c | Z_i) for c in [0, bound.size()): the fdr upper
// bound with k = c + 1, taken over the state's studies. May exceed 1.
void count_cdf_upper_bound(const ConfigState& state, const StudyLogLik& lik, std::size_t gene,
                           std::span<double> bound);

// Upper bound on fdr_k for every gene. The state must cover all studies of lik.
std::vector<double> fdr_k_upper_bound(const ConfigState& state, const StudyLogLik& lik, int k);

FdrTable fdr_upper_bound_range(const ConfigState& state, const StudyLogLik& lik,
                               const std::vector<std::string>& gene_ids, int k_min, int k_max);

}  // namespace sfdr
