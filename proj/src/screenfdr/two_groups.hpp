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

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sfdr {

enum class NullMode { theoretical, empirical };

std::string_view to_string(NullMode mode);
NullMode parse_null_mode(std::string_view s);

// Two-groups mixture on |z|: a half-normal null with scale null_sigma and a
// folded normal(nonnull_mu, nonnull_sigma) non-null component.
struct TwoGroupsModel {
  std::string study_id;
  double pi0 = 1.0;
  double null_sigma = 1.0;
  double nonnull_mu = 1.0;
  double nonnull_sigma = 1.0;
  double power = 0.0;
  NullMode null_mode = NullMode::theoretical;
  bool converged = true;
  bool degenerate = false;
  double loglik = 0.0;
  int iterations = 0;
};

struct NormixOptions {
  NullMode null_mode = NullMode::theoretical;
  int max_iter = 1000;
  double rel_tol = 1e-8;
  double pi0_init = 0.9;
  double pi0_min = 1e-4;
  double mu_min = 1e-3;
  double sigma_min = 1e-3;
};

inline constexpr std::size_t kNormixMinSamples = 50;

struct NormixFit {
  TwoGroupsModel model;
  std::vector<double> loglik_trace;  // one entry per EM iteration, starting at init
};

// EM on absolute z-scores. Throws if fewer than kNormixMinSamples values are
// given. Non-convergence and a pi0 stuck at its bound are reported through the
// model flags, not as errors. The returned model has its power populated.
NormixFit fit_normix(std::span<const double> z_abs, const NormixOptions& opts = {});

// Densities on the folded scale (z >= 0; negative inputs are folded).
double log_density_null(const TwoGroupsModel& m, double z);
double log_density_nonnull_raw(const TwoGroupsModel& m, double z);
double log_density_nonnull_shrunk(const TwoGroupsModel& m, double z);

double density_null(const TwoGroupsModel& m, double z);
double density_nonnull_raw(const TwoGroupsModel& m, double z);
double density_nonnull_shrunk(const TwoGroupsModel& m, double z);
// pi0 f0 + (1 - pi0) f1, with the unshrunk f1.
double density_marginal(const TwoGroupsModel& m, double z);

// Local tdr with the shrunk non-null density; local_fdr is its complement.
double marginal_tdr(const TwoGroupsModel& m, double z);
double local_fdr(const TwoGroupsModel& m, double z);

// Expected unshrunk tdr under f1, integrated numerically.
double estimate_power(const TwoGroupsModel& m);

}  // namespace sfdr
