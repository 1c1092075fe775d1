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
#include "screenfdr/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "screenfdr/error.hpp"
#include "screenfdr/normal.hpp"
#include "screenfdr/parallel.hpp"

namespace sfdr {

std::string_view to_string(BaselineMethod method) {
  switch (method) {
    case BaselineMethod::fisher: return "fisher";
    case BaselineMethod::bh_count: return "bh-count";
    case BaselineMethod::exp_count: return "exp-count";
  }
  return "unknown";
}

BaselineMethod parse_baseline_method(std::string_view s) {
  if (s == "fisher") return BaselineMethod::fisher;
  if (s == "bh-count" || s == "bh_count") return BaselineMethod::bh_count;
  if (s == "exp-count" || s == "exp_count") return BaselineMethod::exp_count;
  fail(ErrorCode::parse, "unknown baseline method '" + std::string(s) + "'");
}

std::vector<std::size_t> BaselineResult::select(int k) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < gene_ids.size(); ++i) {
    const bool hit = method == BaselineMethod::fisher ? qvalue[i] <= level
                                                      : statistic[i] >= static_cast<double>(k);
    if (hit) out.push_back(i);
  }
  return out;
}

std::vector<double> bh_procedure(std::span<const double> pvals) {
  const std::size_t n = pvals.size();
  for (double p : pvals) require(p >= 0.0 && p <= 1.0, "p-values must lie in [0,1]");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pvals[a] < pvals[b]; });
  std::vector<double> q(n);
  double running = 1.0;
  for (std::size_t r = n; r-- > 0;) {
    const std::size_t i = order[r];
    running = std::min(running, pvals[i] * static_cast<double>(n) / static_cast<double>(r + 1));
    q[i] = running;
  }
  return q;
}

double fisher_combined_pvalue(std::span<const double> pvals) {
  require(!pvals.empty(), "Fisher's method needs at least one p-value");
  double t = 0.0;
  for (double p : pvals) t -= 2.0 * std::log(std::max(p, kPMin));
  return stats::chisq_sf(t, 2.0 * static_cast<double>(pvals.size()));
}

BaselineResult fisher_meta(const StatsMatrix& p, double level) {
  require(p.scale == Scale::pvalue, "Fisher's method needs a p-value matrix");
  BaselineResult out;
  out.method = BaselineMethod::fisher;
  out.gene_ids = p.gene_ids;
  out.level = level;
  const std::size_t n = p.n_genes(), m = p.n_studies();
  out.statistic.resize(n);
  out.pvalue.resize(n);
  parallel_for(n, [&](std::size_t i) {
    std::span<const double> row(p.values.data() + i * m, m);
    double t = 0.0;
    for (double v : row) t -= 2.0 * std::log(std::max(v, kPMin));
    out.statistic[i] = t;
    out.pvalue[i] = stats::chisq_sf(t, 2.0 * static_cast<double>(m));
  });
  out.qvalue = bh_procedure(out.pvalue);
  return out;
}

BaselineResult bh_count(const StatsMatrix& p, double level) {
  require(p.scale == Scale::pvalue, "BH counting needs a p-value matrix");
  BaselineResult out;
  out.method = BaselineMethod::bh_count;
  out.gene_ids = p.gene_ids;
  out.level = level;
  const std::size_t n = p.n_genes(), m = p.n_studies();
  out.statistic.assign(n, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    const auto q = bh_procedure(p.column(j));
    for (std::size_t i = 0; i < n; ++i) out.statistic[i] += q[i] <= level ? 1.0 : 0.0;
  }
  return out;
}

BaselineResult exp_count(std::span<const TwoGroupsModel> models, const StatsMatrix& z) {
  require(z.scale == Scale::zscore, "Exp-count needs a z-score matrix");
  require(models.size() == z.n_studies(), "one model per study is required");
  BaselineResult out;
  out.method = BaselineMethod::exp_count;
  out.gene_ids = z.gene_ids;
  const std::size_t n = z.n_genes(), m = z.n_studies();
  out.statistic.assign(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += marginal_tdr(models[j], z(i, j));
    out.statistic[i] = s;
  });
  return out;
}

void write_baseline(std::ostream& out, const BaselineResult& result) {
  const bool fisher = result.method == BaselineMethod::fisher;
  out << "gene\t" << (fisher ? "statistic\tpvalue\tqvalue" : "statistic") << '\n';
  for (std::size_t i = 0; i < result.gene_ids.size(); ++i) {
    out << result.gene_ids[i] << '\t' << format_double(result.statistic[i]);
    if (fisher) {
      out << '\t' << format_double(result.pvalue[i]) << '\t' << format_double(result.qvalue[i]);
    }
    out << '\n';
  }
}

}  // namespace sfdr
