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

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "screenfdr/error.hpp"
#include "screenfdr/indep_dp.hpp"
#include "screenfdr/parallel.hpp"
#include "screenfdr/two_groups.hpp"

namespace sfdr {
namespace {

TEST(IndepDp, RatiosSumToOne) {
  std::mt19937_64 rng(1);
  const auto lr = likelihood_ratios(oracle::random_lik(50, 6, rng));
  for (std::size_t i = 0; i < lr.lr0.size(); ++i) {
    EXPECT_GE(lr.lr0[i], 0.0);
    EXPECT_GE(lr.lr1[i], 0.0);
    EXPECT_NEAR(lr.lr0[i] + lr.lr1[i], 1.0, 1e-10);
  }
}

TEST(IndepDp, KEqualsOneIsAllNullProbability) {
  std::mt19937_64 rng(2);
  const auto lr = likelihood_ratios(oracle::random_lik(40, 5, rng));
  const auto fdr = fdr_k_independent(lr, 1);
  for (std::size_t i = 0; i < lr.n; ++i) {
    double p = 1.0;
    for (std::size_t j = 0; j < lr.m; ++j) p *= lr.lr0[i * lr.m + j];
    EXPECT_NEAR(fdr[i], p, 1e-15);
  }
}

TEST(IndepDp, SingleStudyIsLocalFdr) {
  TwoGroupsModel m;
  m.pi0 = 0.8;
  m.nonnull_mu = 2.5;
  m.nonnull_sigma = 1.0;
  m.power = 0.7;
  StatsMatrix z;
  z.scale = Scale::zscore;
  z.study_ids = {"s"};
  for (int i = 0; i < 30; ++i) {
    z.gene_ids.push_back("g" + std::to_string(i));
    z.values.push_back(-3.0 + 0.2 * i);
  }
  const std::vector<TwoGroupsModel> models{m};
  const auto lr = likelihood_ratios(study_log_likelihoods(models, z));
  const auto fdr = fdr_k_independent(lr, 1);
  for (std::size_t i = 0; i < z.n_genes(); ++i) EXPECT_NEAR(fdr[i], local_fdr(m, z(i, 0)), 1e-12);
}

TEST(IndepDp, MatchesEnumerationM8K3) {
  std::mt19937_64 rng(3);
  const auto lik = oracle::random_lik(100, 8, rng);
  const auto fdr = fdr_k_independent(likelihood_ratios(lik), 3);
  const auto prior = oracle::product_prior(lik.pi0);
  for (std::size_t i = 0; i < lik.n; ++i) EXPECT_NEAR(fdr[i], oracle::fdr_k(lik, i, prior, 3), 1e-12);
}

TEST(IndepDp, RangeMatchesSingleKAndIsMonotone) {
  std::mt19937_64 rng(4);
  const auto lik = oracle::random_lik(60, 7, rng);
  const auto lr = likelihood_ratios(lik);
  std::vector<std::string> ids(lik.n, "g");
  const auto table = fdr_independent_range(lr, ids, 1, 7);
  EXPECT_EQ(table.method, FdrMethod::screen_ind);
  for (int k = 1; k <= 7; ++k) {
    const auto single = fdr_k_independent(lr, k);
    for (std::size_t i = 0; i < lik.n; ++i) {
      EXPECT_EQ(table.at_k(k)[i], single[i]);
      EXPECT_GE(single[i], 0.0);
      EXPECT_LE(single[i], 1.0);
      if (k > 1) EXPECT_GE(table.at_k(k)[i], table.at_k(k - 1)[i] - 1e-15);
    }
  }
  EXPECT_THROW(table.at_k(8), Error);
}

TEST(IndepDp, StudyOrderDoesNotMatter) {
  std::mt19937_64 rng(5);
  const auto lik = oracle::random_lik(30, 6, rng);
  const auto lr = likelihood_ratios(lik);
  LikelihoodRatios rev = lr;
  for (std::size_t i = 0; i < lr.n; ++i) {
    for (std::size_t j = 0; j < lr.m; ++j) {
      rev.lr0[i * lr.m + j] = lr.lr0[i * lr.m + (lr.m - 1 - j)];
      rev.lr1[i * lr.m + j] = lr.lr1[i * lr.m + (lr.m - 1 - j)];
    }
  }
  for (int k = 1; k <= 6; ++k) {
    const auto a = fdr_k_independent(lr, k);
    const auto b = fdr_k_independent(rev, k);
    for (std::size_t i = 0; i < lr.n; ++i) EXPECT_NEAR(a[i], b[i], 1e-13);
  }
}

TEST(IndepDp, RejectsBadK) {
  std::mt19937_64 rng(6);
  const auto lr = likelihood_ratios(oracle::random_lik(5, 3, rng));
  EXPECT_THROW(fdr_k_independent(lr, 0), Error);
  EXPECT_THROW(fdr_k_independent(lr, 4), Error);
}

TEST(IndepDp, ThreadCountDoesNotChangeOutput) {
  std::mt19937_64 rng(7);
  const auto lr = likelihood_ratios(oracle::random_lik(3000, 9, rng));
  set_thread_count(1);
  const auto a = fdr_k_independent(lr, 4);
  set_thread_count(4);
  const auto b = fdr_k_independent(lr, 4);
  set_thread_count(0);
  EXPECT_EQ(a, b);
}

TEST(SelectAtCutoff, Examples) {
  const std::vector<double> ones(5, 1.0);
  EXPECT_TRUE(select_at_cutoff(ones, kDefaultFdrCutoff).empty());
  EXPECT_DOUBLE_EQ(kDefaultFdrCutoff, 0.2);
  const std::vector<double> two{0.1, 0.3};
  EXPECT_EQ(select_at_cutoff(two, 0.2), (std::vector<std::size_t>{0}));
  const std::vector<double> edge{0.2};
  EXPECT_EQ(select_at_cutoff(edge, 0.2).size(), 1u);
}

}  // namespace
}  // namespace sfdr
