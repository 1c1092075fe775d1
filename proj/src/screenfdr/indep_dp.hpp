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
#include <vector>

#include "screenfdr/fdr_table.hpp"
#include "screenfdr/likelihood.hpp"

namespace sfdr {

// fdr_k(i) = P(gene i is non-null in fewer than k studies | Z), assuming the
// studies are independent. Runs the count DP truncated at k-1, O(m k) per gene.
std::vector<double> fdr_k_independent(const LikelihoodRatios& lr, int k);

// One DP pass for every k in [k_min, k_max].
FdrTable fdr_independent_range(const LikelihoodRatios& lr,
                               const std::vector<std::string>& gene_ids, int k_min, int k_max);

// Posterior count distribution for one gene: out[c] = P(exactly c non-null | Z)
// for c < out.size(), with out.size() <= m + 1. Probabilities of larger counts
// are dropped.
void count_distribution(std::span<const double> lr0, std::span<const double> lr1,
                        std::span<double> out);

}  // namespace sfdr
