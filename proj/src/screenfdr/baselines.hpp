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
#include <string>
#include <string_view>
#include <vector>

#include "screenfdr/stats_matrix.hpp"
#include "screenfdr/two_groups.hpp"

namespace sfdr {

enum class BaselineMethod { fisher, bh_count, exp_count };

std::string_view to_string(BaselineMethod method);
BaselineMethod parse_baseline_method(std::string_view s);  // fisher | bh-count | exp-count

inline constexpr double kFisherLevel = 0.1;
inline constexpr double kBhCountLevel = 0.1;

struct BaselineResult {
  BaselineMethod method = BaselineMethod::fisher;
  std::vector<std::string> gene_ids;
  std::vector<double> statistic;  // Fisher T, BH count, or tdr sum
  std::vector<double> pvalue;     // Fisher only
  std::vector<double> qvalue;     // Fisher only
  double level = 0.0;             // q threshold for fisher and bh_count

  // Gene indices selected for replicability level k.
  std::vector<std::size_t> select(int k) const;
};

// Benjamini-Hochberg step-up adjusted q-values, in input order.
std::vector<double> bh_procedure(std::span<const double> pvals);

double fisher_combined_pvalue(std::span<const double> pvals);

BaselineResult fisher_meta(const StatsMatrix& p, double level = kFisherLevel);
BaselineResult bh_count(const StatsMatrix& p, double level = kBhCountLevel);

// Sum over studies of the marginal tdr of each z-score.
BaselineResult exp_count(std::span<const TwoGroupsModel> models, const StatsMatrix& z);

void write_baseline(std::ostream& out, const BaselineResult& result);

}  // namespace sfdr
