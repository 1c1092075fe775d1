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
#include <span>
#include <vector>

#include "screenfdr/stats_matrix.hpp"
#include "screenfdr/two_groups.hpp"

namespace sfdr {

// Per gene and study: log f0(|z|) and log of the power-shrunk f1(|z|), plus
// each study's prior null probability. Row-major n x m.
struct StudyLogLik {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<double> log_f0;
  std::vector<double> log_f1;
  std::vector<double> pi0;

  double lf0(std::size_t gene, std::size_t study) const { return log_f0[gene * m + study]; }
  double lf1(std::size_t gene, std::size_t study) const { return log_f1[gene * m + study]; }

  StudyLogLik select_rows(std::span<const std::size_t> rows) const;
};

StudyLogLik study_log_likelihoods(std::span<const TwoGroupsModel> models, const StatsMatrix& z);

// Posterior null / non-null weights per cell under each study's own prior:
// lr0 = pi0 f0 / f, lr1 = (1 - pi0) f1 / f. They sum to one.
struct LikelihoodRatios {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<double> lr0;
  std::vector<double> lr1;
};

LikelihoodRatios likelihood_ratios(const StudyLogLik& lik);

}  // namespace sfdr
