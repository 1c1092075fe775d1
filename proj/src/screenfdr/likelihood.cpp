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
#include "screenfdr/likelihood.hpp"

#include <cmath>
#include <limits>

#include "screenfdr/error.hpp"
#include "screenfdr/normal.hpp"

namespace sfdr {

StudyLogLik StudyLogLik::select_rows(std::span<const std::size_t> rows) const {
  StudyLogLik out;
  out.n = rows.size();
  out.m = m;
  out.pi0 = pi0;
  out.log_f0.reserve(out.n * m);
  out.log_f1.reserve(out.n * m);
  for (std::size_t r : rows) {
    out.log_f0.insert(out.log_f0.end(), log_f0.begin() + r * m, log_f0.begin() + (r + 1) * m);
    out.log_f1.insert(out.log_f1.end(), log_f1.begin() + r * m, log_f1.begin() + (r + 1) * m);
  }
  return out;
}

StudyLogLik study_log_likelihoods(std::span<const TwoGroupsModel> models, const StatsMatrix& z) {
  require(z.scale == Scale::zscore, "likelihoods need a z-score matrix");
  if (models.size() != z.n_studies()) {
    fail(ErrorCode::invalid_argument,
         "model count " + std::to_string(models.size()) + " does not match study count " +
             std::to_string(z.n_studies()));
  }
  StudyLogLik lik;
  lik.n = z.n_genes();
  lik.m = z.n_studies();
  lik.log_f0.resize(lik.n * lik.m);
  lik.log_f1.resize(lik.n * lik.m);
  for (const auto& model : models) lik.pi0.push_back(model.pi0);
  for (std::size_t i = 0; i < lik.n; ++i) {
    for (std::size_t j = 0; j < lik.m; ++j) {
      lik.log_f0[i * lik.m + j] = log_density_null(models[j], z(i, j));
      lik.log_f1[i * lik.m + j] = log_density_nonnull_shrunk(models[j], z(i, j));
    }
  }
  return lik;
}

LikelihoodRatios likelihood_ratios(const StudyLogLik& lik) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  LikelihoodRatios lr;
  lr.n = lik.n;
  lr.m = lik.m;
  lr.lr0.resize(lik.n * lik.m);
  lr.lr1.resize(lik.n * lik.m);
  for (std::size_t j = 0; j < lik.m; ++j) {
    const double p0 = lik.pi0[j];
    const double lp0 = p0 > 0 ? std::log(p0) : kNegInf;
    const double lp1 = p0 < 1 ? std::log1p(-p0) : kNegInf;
    for (std::size_t i = 0; i < lik.n; ++i) {
      const double a = lp0 + lik.lf0(i, j);
      const double b = lp1 + lik.lf1(i, j);
      double w1;
      if (b == kNegInf) {
        w1 = 0.0;
      } else if (a == kNegInf) {
        w1 = 1.0;
      } else {
        w1 = std::exp(b - stats::log_add_exp(a, b));
      }
      lr.lr1[i * lik.m + j] = w1;
      lr.lr0[i * lik.m + j] = 1.0 - w1;
    }
  }
  return lr;
}

}  // namespace sfdr
