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
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "screenfdr/config_em.hpp"
#include "screenfdr/error.hpp"
#include "screenfdr/indep_dp.hpp"

namespace sfdr {
namespace {

// Genes drawn from a known configuration prior with unit-power two-groups
// densities for every study.
StudyLogLik simulate_configs(std::size_t n, const std::vector<double>& prior, std::size_t m,
                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(prior.begin(), prior.end());
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<TwoGroupsModel> models(m);
  StatsMatrix z;
  z.scale = Scale::zscore;
  for (std::size_t j = 0; j < m; ++j) {
    models[j].pi0 = 0.5;
    models[j].nonnull_mu = 3.0;
    models[j].nonnull_sigma = 1.0;
    models[j].power = 1.0;
    z.study_ids.push_back("s" + std::to_string(j));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t h = pick(rng);
    z.gene_ids.push_back("g" + std::to_string(i));
    for (std::size_t j = 0; j < m; ++j) {
      z.values.push_back(((h >> j) & 1) ? 3.0 + normal(rng) : normal(rng));
    }
  }
  return study_log_likelihoods(models, z);
}

std::vector<double> full_prior(const ConfigState& s) {
  std::vector<double> prior(std::size_t{1} << s.l(), 0.0);
  for (std::size_t h = 0; h < s.configs.size(); ++h) prior[s.configs[h]] = s.probs[h];
  return prior;
}

void expect_monotone(const std::vector<double>& trace) {
  for (std::size_t t = 1; t < trace.size(); ++t) EXPECT_GE(trace[t], trace[t - 1] - 1e-10) << t;
}

TEST(ConfigEm, SingleConfigurationTakesAllMass) {
  const std::vector<double> lik{0.3, 0.8, 0.1};
  const std::vector<double> init{1.0};
  const auto res = em_restricted(lik, 3, init);
  ASSERT_EQ(res.probs.size(), 1u);
  EXPECT_EQ(res.probs[0], 1.0);
  EXPECT_TRUE(res.converged);
  EXPECT_EQ(res.iterations, 1);
}

TEST(ConfigEm, RecoversKnownPriorM3) {
  const std::vector<double> truth{0.5, 0.1, 0.1, 0.05, 0.1, 0.05, 0.02, 0.08};
  std::vector<double> tv;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto lik = simulate_configs(5000, truth, 3, seed);
    const std::vector<std::size_t> studies{0, 1, 2};
    const auto state = initial_state(lik, studies, 8);
    double d = 0.0;
    for (std::size_t h = 0; h < 8; ++h) d += std::fabs(state.probs[h] - truth[state.configs[h]]);
    tv.push_back(0.5 * d);
    expect_monotone(state.rounds.front().loglik_trace);
  }
  std::nth_element(tv.begin(), tv.begin() + 10, tv.end());
  EXPECT_LE(tv[10], 0.05);
}

TEST(ConfigEm, ZeroInitStaysZero) {
  std::mt19937_64 rng(3);
  const auto lik = oracle::random_lik(200, 3, rng);
  std::vector<Config> configs(8);
  for (Config h = 0; h < 8; ++h) configs[h] = h;
  const std::vector<std::size_t> studies{0, 1, 2};
  auto ll = config_log_likelihoods(lik, studies, configs);
  for (double& v : ll) v = std::exp(v);
  std::vector<double> init{0.2, 0.0, 0.2, 0.1, 0.0, 0.3, 0.2, 0.0};
  const auto res = em_restricted(ll, lik.n, init);
  EXPECT_EQ(res.probs[1], 0.0);
  EXPECT_EQ(res.probs[4], 0.0);
  EXPECT_EQ(res.probs[7], 0.0);
  expect_monotone(res.loglik_trace);
}

TEST(ConfigEm, RejectsBadInit) {
  const std::vector<double> lik{1.0, 1.0};
  EXPECT_THROW(em_restricted(lik, 1, std::vector<double>{0.5, 0.4}), Error);
  EXPECT_THROW(em_restricted(lik, 1, std::vector<double>{1.5, -0.5}), Error);
  EXPECT_THROW(em_restricted(lik, 2, std::vector<double>{0.5, 0.5}), Error);
}

TEST(ConfigEm, LexOrder) {
  EXPECT_TRUE(lex_less(0b10, 0b01));   // differ first at bit 0; 0b10 has 0 there
  EXPECT_FALSE(lex_less(0b01, 0b10));
  EXPECT_FALSE(lex_less(5, 5));
  EXPECT_TRUE(lex_less(0, 1));
}

TEST(ConfigEm, InitialStateShape) {
  std::mt19937_64 rng(4);
  const auto lik = oracle::random_lik(100, 8, rng);
  const auto order = oracle::iota_studies(8);
  const auto s = initial_state(lik, std::span(order).first(3), 16);
  EXPECT_EQ(s.l(), 3u);
  EXPECT_EQ(s.configs.size(), 8u);
  EXPECT_DOUBLE_EQ(s.coverage, 1.0);
  EXPECT_EQ(s.exclusion_bound, 0.0);
  EXPECT_THROW(initial_state(lik, std::span(order).first(5), 16), Error);
  EXPECT_THROW(restricted_em(lik, order, 12), Error);
}

TEST(ConfigEm, FullCapacityNeverPrunes) {
  std::mt19937_64 rng(5);
  const auto lik = oracle::random_lik(150, 6, rng);
  const auto order = oracle::iota_studies(6);
  const auto s = restricted_em(lik, order, 64);
  EXPECT_EQ(s.configs.size(), 64u);
  EXPECT_NEAR(s.coverage, 1.0, 1e-12);
  EXPECT_EQ(s.exclusion_bound, 0.0);
  EXPECT_TRUE(s.exact());
}

TEST(ConfigEm, FinalRoundIsNotPruned) {
  std::mt19937_64 rng(6);
  const auto lik = oracle::random_lik(150, 6, rng);
  const auto s = restricted_em(lik, oracle::iota_studies(6), 8);
  // l0 = 2, then studies 3..5 absorbed; the last absorb keeps all n_H configurations.
  EXPECT_EQ(s.configs.size(), 8u);
  EXPECT_EQ(s.rounds.size(), 5u);
  for (const auto& r : s.rounds) expect_monotone(r.loglik_trace);
}

TEST(ConfigEm, PrunedStateVersusFullRun) {
  std::mt19937_64 rng(7);
  const auto lik = oracle::random_lik(400, 6, rng, 1.0);
  const auto order = oracle::iota_studies(6);
  const auto full = restricted_em(lik, order, 64);
  const auto full_p = full_prior(full);
  // Drive the rounds by hand to watch the exclusion bound.
  ConfigState s = initial_state(lik, std::span(order).first(2), 8);
  double last_eps = 0.0;
  for (std::size_t j = 2; j < 6; ++j) {
    s = absorb_study(s, lik, j, j + 1 < 6);
    EXPECT_GE(s.exclusion_bound, last_eps);
    last_eps = s.exclusion_bound;
    EXPECT_LE(s.coverage, 1.0 + 1e-12);
    EXPECT_LE(s.configs.size(), 8u);
    double sum = 0.0;
    for (double p : s.probs) sum += p;
    EXPECT_NEAR(sum, s.coverage, 1e-10);
  }
  EXPECT_GE(s.exclusion_bound, 0.0);
  // Total-variation slack between the pruned and the full fit.
  double tv = 0.0;
  const auto pruned_p = full_prior(s);
  for (std::size_t h = 0; h < 64; ++h) tv += std::fabs(pruned_p[h] - full_p[h]);
  tv *= 0.5;
  for (std::size_t h = 0; h < s.configs.size(); ++h) {
    EXPECT_LE(std::fabs(s.probs[h] - full_p[s.configs[h]]), s.exclusion_bound + tv + 1e-12);
  }
}

TEST(ConfigEm, WarmStartSplitsParentMass) {
  std::mt19937_64 rng(8);
  const auto lik = oracle::random_lik(200, 3, rng);
  const std::vector<std::size_t> first{0, 1};
  const auto s = initial_state(lik, first, 8);
  EmOptions one;
  one.max_iter = 0;  // no M-step: the state holds the warm start
  const auto next = absorb_study(s, lik, 2, false, one);
  for (std::size_t p = 0; p < s.configs.size(); ++p) {
    EXPECT_NEAR(next.probs[2 * p], 0.5 * s.probs[p], 1e-15);
    EXPECT_NEAR(next.probs[2 * p + 1], 0.5 * s.probs[p], 1e-15);
  }
}

TEST(ConfigEm, TieBreakKeepsLexSmallest) {
  // Every gene has identical likelihood under all configurations, so the
  // warm start is a fixed point and all extensions tie.
  StudyLogLik lik;
  lik.n = 10;
  lik.m = 3;
  lik.pi0 = {0.5, 0.5, 0.5};
  lik.log_f0.assign(30, 0.0);
  lik.log_f1.assign(30, 0.0);
  const std::vector<std::size_t> first{0};
  const auto s0 = initial_state(lik, first, 4);
  const auto s1 = absorb_study(s0, lik, 1, true);
  ASSERT_EQ(s1.configs.size(), 2u);
  // As vectors (h_1, h_2) the lex smallest are (0,0) and (0,1); h_2 is bit 1.
  std::vector<Config> got = s1.configs;
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got, (std::vector<Config>{0b00, 0b10}));
}

TEST(ConfigEm, UpperBoundExactWithoutPruning) {
  std::mt19937_64 rng(9);
  const auto lik = oracle::random_lik(100, 6, rng);
  const auto s = restricted_em(lik, oracle::iota_studies(6), 64);
  const auto prior = full_prior(s);
  for (int k = 1; k <= 6; ++k) {
    const auto ub = fdr_k_upper_bound(s, lik, k);
    for (std::size_t i = 0; i < lik.n; ++i) EXPECT_NEAR(ub[i], oracle::fdr_k(lik, i, prior, k), 1e-12);
  }
}

TEST(ConfigEm, UpperBoundHoldsForTrueRestrictedPrior) {
  // Feed the bound the full prior's values on the kept set and the largest
  // excluded prior as epsilon; the inequality must then hold for every gene.
  std::mt19937_64 rng(10);
  const auto lik = oracle::random_lik(100, 10, rng, 1.0);
  const auto order = oracle::iota_studies(10);
  const auto prior = full_prior(restricted_em(lik, order, 1024));
  for (std::size_t n_h : {16, 64}) {
    auto state = restricted_em(lik, order, n_h);
    ASSERT_GT(state.exclusion_bound, 0.0);
    std::vector<bool> kept(prior.size(), false);
    for (std::size_t h = 0; h < state.configs.size(); ++h) {
      state.probs[h] = prior[state.configs[h]];
      kept[state.configs[h]] = true;
    }
    double eps = 0.0;
    for (std::size_t h = 0; h < prior.size(); ++h) {
      if (!kept[h]) eps = std::max(eps, prior[h]);
    }
    state.exclusion_bound = eps;
    for (int k = 1; k <= 10; ++k) {
      const auto ub = fdr_k_upper_bound(state, lik, k);
      for (std::size_t i = 0; i < lik.n; ++i) {
        EXPECT_GE(ub[i], oracle::fdr_k(lik, i, prior, k) - 1e-12) << "gene " << i << " k " << k;
      }
    }
  }
}

TEST(ConfigEm, UpperBoundIsMonotoneInK) {
  std::mt19937_64 rng(11);
  const auto lik = oracle::random_lik(80, 9, rng, 1.0);
  const auto s = restricted_em(lik, oracle::iota_studies(9), 16);
  std::vector<std::string> ids(lik.n, "g");
  const auto t = fdr_upper_bound_range(s, lik, ids, 1, 9);
  EXPECT_EQ(t.method, FdrMethod::repfdr_ub);
  for (int k = 2; k <= 9; ++k) {
    for (std::size_t i = 0; i < lik.n; ++i) {
      EXPECT_GE(t.at_k(k)[i], t.at_k(k - 1)[i] - 1e-12);
      EXPECT_GE(t.at_k(k)[i], 0.0);
    }
  }
  EXPECT_THROW(fdr_k_upper_bound(s, lik, 10), Error);
}

TEST(ConfigEm, OrderByPowerIsStableDescending) {
  const std::vector<double> power{0.2, 0.9, 0.2, 0.5};
  EXPECT_EQ(order_by_power(power), (std::vector<std::size_t>{1, 3, 0, 2}));
}

}  // namespace
}  // namespace sfdr
