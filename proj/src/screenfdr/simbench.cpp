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
#include "screenfdr/simbench.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <tuple>

#include "screenfdr/baselines.hpp"
#include "screenfdr/error.hpp"
#include "screenfdr/normal.hpp"
#include "screenfdr/parallel.hpp"
#include "screenfdr/screen_pipeline.hpp"

namespace sfdr {
namespace {

using Rng = std::mt19937_64;

double sample_beta(Rng& rng, double a, double b) {
  std::gamma_distribution<double> ga(a, 1.0), gb(b, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  const double v = x / (x + y);
  return std::clamp(v, kPMin, 1.0 - kPMin);
}

double sample_nonnull_p(Rng& rng, double x) {
  std::bernoulli_distribution coin(0.5);
  return coin(rng) ? sample_beta(rng, 1.0, x) : sample_beta(rng, x, 1.0);
}

double sample_null_p(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::clamp(u(rng), kPMin, 1.0 - kPMin);
}

SimInstance make_instance(std::string scenario, std::size_t n, std::size_t m, Scale scale,
                          std::uint64_t seed) {
  SimInstance sim;
  sim.scenario = std::move(scenario);
  sim.n = n;
  sim.m = m;
  sim.seed = seed;
  sim.truth.assign(n * m, 0);
  sim.data.scale = scale;
  sim.data.values.assign(n * m, 0.0);
  sim.data.gene_ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) sim.data.gene_ids.push_back("g" + std::to_string(i + 1));
  for (std::size_t j = 0; j < m; ++j) sim.data.study_ids.push_back("s" + std::to_string(j + 1));
  return sim;
}

// Marks exactly `count` uniformly chosen genes non-null in column j.
void plant_random(SimInstance& sim, std::size_t j, std::size_t count, Rng& rng) {
  require(count <= sim.n, "more planted non-nulls than genes");
  std::vector<std::size_t> genes(sim.n);
  std::iota(genes.begin(), genes.end(), 0);
  for (std::size_t t = 0; t < count; ++t) {
    std::uniform_int_distribution<std::size_t> pick(t, sim.n - 1);
    std::swap(genes[t], genes[pick(rng)]);
    sim.truth[genes[t] * sim.m + j] = 1;
  }
}

// Thresholds an equicorrelated Gaussian block (one shared factor per gene)
// at the given normal quantile.
void plant_correlated_block(SimInstance& sim, std::size_t first, std::size_t size, double r,
                            double quantile, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double tau = stats::norm_ppf(quantile);
  const double a = std::sqrt(r), b = std::sqrt(1.0 - r);
  for (std::size_t i = 0; i < sim.n; ++i) {
    const double f = normal(rng);
    for (std::size_t j = first; j < first + size; ++j) {
      const double v = a * f + b * normal(rng);
      sim.truth[i * sim.m + j] = v >= tau ? 1 : 0;
    }
  }
}

void fill_pvalues(SimInstance& sim, double x, Rng& rng,
                  const std::vector<std::uint8_t>* left_only = nullptr) {
  for (std::size_t i = 0; i < sim.n; ++i) {
    for (std::size_t j = 0; j < sim.m; ++j) {
      double p;
      if (!sim.is_nonnull(i, j)) {
        p = sample_null_p(rng);
      } else if (left_only && (*left_only)[i * sim.m + j]) {
        p = sample_beta(rng, 1.0, x);
      } else {
        p = sample_nonnull_p(rng, x);
      }
      sim.data(i, j) = p;
    }
  }
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace

std::vector<int> SimInstance::truth_counts() const {
  std::vector<int> counts(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) counts[i] += truth[i * m + j];
  }
  return counts;
}

SimInstance simulate_scenario1(const Scenario1Options& opts) {
  require(opts.n > 0 && opts.m > 0, "scenario 1 needs n > 0 and m > 0");
  require(opts.x > 0, "x must be positive");
  require(opts.boosted_genes <= opts.n, "more boosted genes than genes");
  Rng rng(opts.seed);
  SimInstance sim = make_instance("s1", opts.n, opts.m, Scale::pvalue, opts.seed);
  sim.x = opts.x;
  for (std::size_t j = 0; j < opts.m; ++j) plant_random(sim, j, opts.nonnull_per_study, rng);

  // Boosted genes gain extra non-null studies on top of their base assignment.
  std::vector<std::uint8_t> left_only(opts.n * opts.m, 0);
  std::vector<std::size_t> genes(opts.n);
  std::iota(genes.begin(), genes.end(), 0);
  std::shuffle(genes.begin(), genes.end(), rng);
  for (std::size_t t = 0; t < opts.boosted_genes; ++t) {
    const std::size_t i = genes[t];
    std::vector<std::size_t> null_studies;
    for (std::size_t j = 0; j < opts.m; ++j) {
      if (!sim.is_nonnull(i, j)) null_studies.push_back(j);
    }
    std::shuffle(null_studies.begin(), null_studies.end(), rng);
    const std::size_t extra = std::min(opts.boost_studies, null_studies.size());
    for (std::size_t e = 0; e < extra; ++e) {
      sim.truth[i * opts.m + null_studies[e]] = 1;
      left_only[i * opts.m + null_studies[e]] = 1;
    }
  }
  fill_pvalues(sim, opts.x, rng, &left_only);
  sim.data.tail = Tail::one_sided;
  return sim;
}

SimInstance simulate_scenario2(const Scenario2Options& opts) {
  require(opts.n > 0 && opts.m > 0, "scenario 2 needs n > 0 and m > 0");
  require(opts.clusters >= 1 && opts.m % opts.clusters == 0,
          "study count must be divisible by the cluster count");
  require(opts.r >= 0.0 && opts.r <= 1.0, "r must lie in [0,1]");
  require(opts.quantile > 0.0 && opts.quantile < 1.0, "quantile must lie in (0,1)");
  Rng rng(opts.seed);
  SimInstance sim = make_instance("s2", opts.n, opts.m, Scale::pvalue, opts.seed);
  sim.x = opts.x;
  sim.clusters = opts.clusters;
  sim.r = opts.r;
  const std::size_t size = opts.m / opts.clusters;
  for (std::size_t c = 0; c < opts.clusters; ++c) {
    plant_correlated_block(sim, c * size, size, opts.r, opts.quantile, rng);
  }
  fill_pvalues(sim, opts.x, rng);
  sim.data.tail = Tail::one_sided;
  return sim;
}

SimInstance simulate_dense(const DenseOptions& opts) {
  const std::size_t m = opts.null_studies + opts.indep_studies + opts.cluster_studies;
  require(opts.n > 0 && m > 0, "dense scenario needs n > 0 and m > 0");
  require(opts.nonnull_fraction > 0.0 && opts.nonnull_fraction < 1.0,
          "non-null fraction must lie in (0,1)");
  Rng rng(opts.seed);
  SimInstance sim = make_instance("dense", opts.n, m, Scale::zscore, opts.seed);
  sim.r = opts.r;
  sim.clusters = 1;
  const auto count = static_cast<std::size_t>(std::llround(opts.nonnull_fraction * opts.n));
  for (std::size_t j = opts.null_studies; j < opts.null_studies + opts.indep_studies; ++j) {
    plant_random(sim, j, count, rng);
  }
  if (opts.cluster_studies > 0) {
    plant_correlated_block(sim, opts.null_studies + opts.indep_studies, opts.cluster_studies,
                           opts.r, 1.0 - opts.nonnull_fraction, rng);
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0; i < sim.n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (sim.is_nonnull(i, j)) {
        const double mean = coin(rng) ? opts.effect_mean : -opts.effect_mean;
        sim.data(i, j) = mean + opts.effect_sd * normal(rng);
      } else {
        sim.data(i, j) = normal(rng);
      }
    }
  }
  return sim;
}

EvalScore evaluate(std::span<const std::size_t> selected, std::span<const int> truth_counts,
                   int k) {
  std::vector<std::uint8_t> chosen(truth_counts.size(), 0);
  for (std::size_t i : selected) {
    require(i < truth_counts.size(), "selected gene index out of range");
    chosen[i] = 1;
  }
  std::size_t n_sel = 0, n_true = 0, n_both = 0;
  for (std::size_t i = 0; i < truth_counts.size(); ++i) {
    const bool t = truth_counts[i] >= k;
    n_sel += chosen[i];
    n_true += t;
    n_both += chosen[i] && t;
  }
  EvalScore score;
  score.k = k;
  score.n_selected = n_sel;
  const std::size_t uni = n_sel + n_true - n_both;
  score.jaccard = uni == 0 ? 1.0 : static_cast<double>(n_both) / static_cast<double>(uni);
  score.fdp = static_cast<double>(n_sel - n_both) / static_cast<double>(std::max<std::size_t>(1, n_sel));
  return score;
}

void write_truth(std::ostream& out, const SimInstance& sim) {
  out << "gene";
  for (const auto& s : sim.data.study_ids) out << '\t' << s;
  out << '\n';
  for (std::size_t i = 0; i < sim.n; ++i) {
    out << sim.data.gene_ids[i];
    for (std::size_t j = 0; j < sim.m; ++j) out << '\t' << int{sim.truth[i * sim.m + j]};
    out << '\n';
  }
}

std::vector<int> read_truth_counts(std::istream& in, std::vector<std::string>* gene_ids) {
  const StatsMatrix t = parse_matrix(in, Scale::zscore, "truth");
  std::vector<int> counts(t.n_genes(), 0);
  for (std::size_t i = 0; i < t.n_genes(); ++i) {
    for (std::size_t j = 0; j < t.n_studies(); ++j) {
      const double v = t(i, j);
      if (v != 0.0 && v != 1.0) {
        fail(ErrorCode::parse, "truth matrix entries must be 0 or 1 (gene '" + t.gene_ids[i] +
                                   "', study '" + t.study_ids[j] + "')");
      }
      counts[i] += static_cast<int>(v);
    }
  }
  if (gene_ids) *gene_ids = t.gene_ids;
  return counts;
}

std::string_view to_string(BenchMethod method) {
  switch (method) {
    case BenchMethod::fisher: return "fisher";
    case BenchMethod::exp_count: return "exp_count";
    case BenchMethod::bh_count: return "bh_count";
    case BenchMethod::screen_ind: return "screen_ind";
    case BenchMethod::repfdr_ub: return "repfdr_ub";
    case BenchMethod::screen: return "screen";
  }
  return "unknown";
}

BenchMethod parse_bench_method(std::string_view s) {
  for (BenchMethod m : all_bench_methods()) {
    std::string alt(to_string(m));
    std::replace(alt.begin(), alt.end(), '_', '-');
    if (s == to_string(m) || s == alt) return m;
  }
  fail(ErrorCode::parse, "unknown benchmark method '" + std::string(s) + "'");
}

std::vector<BenchMethod> all_bench_methods() {
  return {BenchMethod::fisher,     BenchMethod::exp_count, BenchMethod::bh_count,
          BenchMethod::screen_ind, BenchMethod::repfdr_ub, BenchMethod::screen};
}

SimInstance simulate(const BenchSpec& spec, std::uint64_t seed) {
  if (spec.scenario == "s1") {
    Scenario1Options o;
    o.n = spec.n;
    o.m = spec.m;
    o.x = spec.x;
    o.seed = seed;
    return simulate_scenario1(o);
  }
  if (spec.scenario == "s2") {
    Scenario2Options o;
    o.n = spec.n;
    o.m = spec.m;
    o.clusters = spec.clusters;
    o.r = spec.r;
    o.x = spec.x;
    o.seed = seed;
    return simulate_scenario2(o);
  }
  if (spec.scenario == "dense") {
    DenseOptions o;
    o.n = spec.n;
    o.seed = seed;
    return simulate_dense(o);
  }
  fail(ErrorCode::invalid_argument, "unknown scenario '" + spec.scenario + "' (s1|s2|dense)");
}

std::vector<BenchRow> run_benchmark(const BenchSpec& spec) {
  require(!spec.seeds.empty(), "benchmark needs at least one seed");
  require(!spec.methods.empty(), "benchmark needs at least one method");
  std::vector<std::vector<BenchRow>> per_seed(spec.seeds.size());
  parallel_tasks(spec.seeds.size(), [&](std::size_t s) {
    const std::uint64_t seed = spec.seeds[s];
    const SimInstance sim = simulate(spec, seed);
    require(spec.k_min >= 1 && spec.k_max >= spec.k_min &&
                static_cast<std::size_t>(spec.k_max) <= sim.m,
            "benchmark k range outside [1, m]");
    StatsMatrix p, z;
    if (sim.data.scale == Scale::pvalue) {
      p = sim.data;
      z = pvalues_to_zscores(p, Tail::one_sided);
    } else {
      z = sim.data;
      p = zscores_to_pvalues(z, Tail::two_sided_abs);
    }
    NormixOptions no;
    no.null_mode = spec.null_mode;
    const auto models = fit_models(z, no);
    const auto counts = sim.truth_counts();
    auto& rows = per_seed[s];
    auto emit = [&](BenchMethod method, int k, const std::vector<std::size_t>& sel) {
      const EvalScore e = evaluate(sel, counts, k);
      rows.push_back({spec.scenario, k, std::string(to_string(method)), std::to_string(seed),
                      e.jaccard, e.fdp, static_cast<double>(e.n_selected)});
    };
    auto emit_table = [&](BenchMethod method, const FdrTable& t) {
      for (int k = spec.k_min; k <= spec.k_max; ++k) {
        emit(method, k, select_at_cutoff(t.at_k(k), spec.cutoff));
      }
    };
    for (BenchMethod method : spec.methods) {
      switch (method) {
        case BenchMethod::fisher: {
          const auto res = fisher_meta(p);
          for (int k = spec.k_min; k <= spec.k_max; ++k) emit(method, k, res.select(k));
          break;
        }
        case BenchMethod::exp_count: {
          const auto res = exp_count(models, z);
          for (int k = spec.k_min; k <= spec.k_max; ++k) emit(method, k, res.select(k));
          break;
        }
        case BenchMethod::bh_count: {
          const auto res = bh_count(p);
          for (int k = spec.k_min; k <= spec.k_max; ++k) emit(method, k, res.select(k));
          break;
        }
        case BenchMethod::screen_ind:
          emit_table(method, screen_ind(z, models, spec.k_min, spec.k_max));
          break;
        case BenchMethod::repfdr_ub:
          emit_table(method, repfdr_ub(z, models, spec.k_min, spec.k_max, spec.n_h).table);
          break;
        case BenchMethod::screen: {
          ScreenOptions so;
          so.k_min = spec.k_min;
          so.k_max = spec.k_max;
          so.n_h = spec.n_h;
          so.cutoff = spec.cutoff;
          so.cluster.bootstrap = spec.bootstrap;
          so.cluster.edge_threshold = spec.edge_threshold;
          so.cluster.seed = seed;
          emit_table(method, screen_with_models(z, models, so).table);
          break;
        }
      }
    }
  });

  std::vector<BenchRow> rows;
  for (auto& r : per_seed) rows.insert(rows.end(), r.begin(), r.end());
  std::map<std::pair<std::size_t, int>, std::vector<const BenchRow*>> groups;
  for (const auto& r : rows) {
    const auto mi = static_cast<std::size_t>(parse_bench_method(r.method));
    groups[{mi, r.k}].push_back(&r);
  }
  std::vector<BenchRow> medians;
  for (BenchMethod method : spec.methods) {
    for (int k = spec.k_min; k <= spec.k_max; ++k) {
      const auto it = groups.find({static_cast<std::size_t>(method), k});
      if (it == groups.end()) continue;
      std::vector<double> j, f, ns;
      for (const BenchRow* r : it->second) {
        j.push_back(r->jaccard);
        f.push_back(r->fdp);
        ns.push_back(r->n_selected);
      }
      medians.push_back({spec.scenario, k, std::string(to_string(method)), "median", median(j),
                         median(f), median(ns)});
    }
  }
  rows.insert(rows.end(), medians.begin(), medians.end());
  return rows;
}

void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows) {
  out << "scenario,k,method,seed,jaccard,fdp,n_selected\n";
  for (const auto& r : rows) {
    out << r.scenario << ',' << r.k << ',' << r.method << ',' << r.seed << ','
        << format_double(r.jaccard) << ',' << format_double(r.fdp) << ','
        << format_double(r.n_selected) << '\n';
  }
}

}  // namespace sfdr
