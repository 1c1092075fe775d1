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
#include "screenfdr/indep_dp.hpp"

#include <algorithm>

#include "screenfdr/error.hpp"
#include "screenfdr/parallel.hpp"

namespace sfdr {

void count_distribution(std::span<const double> lr0, std::span<const double> lr1,
                        std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  if (out.empty()) return;
  out[0] = 1.0;
  const std::size_t width = out.size();
  for (std::size_t j = 0; j < lr0.size(); ++j) {
    // Only counts up to j+1 are reachable after j+1 studies.
    const std::size_t top = std::min(width - 1, j + 1);
    for (std::size_t c = top; c > 0; --c) out[c] = lr0[j] * out[c] + lr1[j] * out[c - 1];
    out[0] *= lr0[j];
  }
}

FdrTable fdr_independent_range(const LikelihoodRatios& lr,
                               const std::vector<std::string>& gene_ids, int k_min, int k_max) {
  const int m = static_cast<int>(lr.m);
  if (k_min < 1 || k_max < k_min || k_max > m) {
    fail(ErrorCode::out_of_range, "k range [" + std::to_string(k_min) + "," +
                                      std::to_string(k_max) + "] outside [1," +
                                      std::to_string(m) + "]");
  }
  require(gene_ids.size() == lr.n, "gene id count does not match likelihood rows");
  FdrTable table;
  table.gene_ids = gene_ids;
  table.k_min = k_min;
  table.k_max = k_max;
  table.method = FdrMethod::screen_ind;
  table.values.assign(static_cast<std::size_t>(k_max - k_min + 1), std::vector<double>(lr.n));
  parallel_blocks(lr.n, [&](std::size_t b, std::size_t e) {
    std::vector<double> u(static_cast<std::size_t>(k_max));
    for (std::size_t i = b; i < e; ++i) {
      count_distribution({lr.lr0.data() + i * lr.m, lr.m}, {lr.lr1.data() + i * lr.m, lr.m}, u);
      double cum = 0.0;
      for (int c = 0; c < k_max; ++c) {
        cum += u[static_cast<std::size_t>(c)];
        // fdr_k sums counts 0..k-1.
        const int k = c + 1;
        if (k >= k_min) table.values[static_cast<std::size_t>(k - k_min)][i] = std::min(1.0, cum);
      }
    }
  });
  return table;
}

std::vector<double> fdr_k_independent(const LikelihoodRatios& lr, int k) {
  std::vector<std::string> ids(lr.n);
  return fdr_independent_range(lr, ids, k, k).values.front();
}

}  // namespace sfdr
