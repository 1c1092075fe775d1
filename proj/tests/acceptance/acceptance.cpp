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
// Acceptance suite. Prints one PASS/FAIL line per criterion (with indented
// detail lines) and exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "screenfdr/baselines.hpp"
#include "screenfdr/config_em.hpp"
#include "screenfdr/indep_dp.hpp"
#include "screenfdr/likelihood.hpp"
#include "screenfdr/parallel.hpp"
#include "screenfdr/screen_pipeline.hpp"
#include "screenfdr/simbench.hpp"
#include "screenfdr/study_cluster.hpp"
#include "screenfdr/two_groups.hpp"

namespace sfdr {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::vector<std::string> details;
};

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

// Posterior count distribution of one gene by enumeration under any prior.
std::vector<double> enumerated_counts(const StudyLogLik& lik, std::size_t gene,
                                      const std::vector<double>& prior) {
  const auto post = oracle::posterior(lik, gene, prior);
  std::vector<double> counts(lik.m + 1, 0.0);
  for (std::uint64_t h = 0; h < post.size(); ++h) counts[oracle::bits(h)] += post[h];
  return counts;
}

// Data-derived likelihoods: simulate, convert to z, fit the two-groups models.
StudyLogLik simulated_lik(std::size_t n, std::size_t m, std::uint64_t seed, int variant) {
  SimInstance sim;
  if (variant == 0) {
    Scenario1Options o;
    o.n = n;
    o.m = m;
    o.nonnull_per_study = n / 8;
    o.boosted_genes = n / 50;
    o.seed = seed;
    sim = simulate_scenario1(o);
  } else {
    Scenario2Options o;
    o.n = n;
    o.m = m;
    o.clusters = variant == 1 ? 1 : 2;
    o.r = variant == 1 ? 0.8 : 0.4;
    o.x = 100.0;
    o.seed = seed;
    sim = simulate_scenario2(o);
  }
  const auto z = pvalues_to_zscores(sim.data, Tail::one_sided);
  return study_log_likelihoods(fit_models(z), z);
}

// Monotonicity bookkeeping shared by criteria 3 and 4.
struct EmAudit {
  std::size_t fits = 0;
  std::size_t violations = 0;
  double worst_drop = 0.0;
  std::size_t zero_checks = 0;
  std::size_t zero_violations = 0;

  void trace(const std::vector<double>& ll) {
    ++fits;
    for (std::size_t t = 1; t < ll.size(); ++t) {
      const double drop = ll[t - 1] - ll[t];
      if (drop > 1e-10) {
        ++violations;
        worst_drop = std::max(worst_drop, drop);
      }
    }
  }
};

EmAudit g_audit;

// ---------------------------------------------------------------------------

Outcome criterion1() {
  std::mt19937_64 rng(101);
  double max_err = 0.0, dp_seconds = 0.0;
  const auto t0 = Clock::now();
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t m = 1 + inst % 12;
    const auto lik = oracle::random_lik(200, m, rng);
    const auto t1 = Clock::now();
    const auto lr = likelihood_ratios(lik);
    std::vector<std::vector<double>> dp;
    for (int k = 1; k <= static_cast<int>(m); ++k) dp.push_back(fdr_k_independent(lr, k));
    dp_seconds += seconds_since(t1);
    const auto prior = oracle::product_prior(lik.pi0);
    for (std::size_t i = 0; i < lik.n; ++i) {
      const auto counts = enumerated_counts(lik, i, prior);
      double cum = 0.0;
      for (std::size_t k = 1; k <= m; ++k) {
        cum += counts[k - 1];
        max_err = std::max(max_err, std::fabs(dp[k - 1][i] - cum));
      }
    }
  }
  const double total = seconds_since(t0);
  Outcome o;
  o.pass = max_err <= 1e-12 && total < 10.0;
  o.details.push_back(fmt("100 instances, m=1..12, n=200: max |DP - enumeration| = %.3g (limit 1e-12)", max_err));
  o.details.push_back(fmt("DP time %.3f s, total with oracle %.3f s (limit 10 s)", dp_seconds, total));
  return o;
}

Outcome criterion2() {
  std::mt19937_64 rng(202);
  double merge_err = 0.0, delta_err = 0.0;
  for (int inst = 0; inst < 50; ++inst) {
    std::uniform_int_distribution<int> mdist(2, 10);
    const std::size_t m = static_cast<std::size_t>(mdist(rng));
    const std::size_t nc = std::min<std::size_t>(m, 2 + inst % 2);
    std::vector<std::size_t> perm = oracle::iota_studies(m);
    std::shuffle(perm.begin(), perm.end(), rng);
    // Split the permuted studies into nc non-empty clusters.
    std::vector<std::size_t> cuts;
    std::vector<std::size_t> inner(m - 1);
    for (std::size_t i = 0; i < m - 1; ++i) inner[i] = i + 1;
    std::shuffle(inner.begin(), inner.end(), rng);
    cuts.assign(inner.begin(), inner.begin() + (nc - 1));
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(m);
    std::vector<std::vector<std::size_t>> clusters;
    std::size_t start = 0;
    for (std::size_t c : cuts) {
      clusters.emplace_back(perm.begin() + start, perm.begin() + c);
      start = c;
    }
    const auto lik = oracle::random_lik(100, m, rng);
    std::vector<std::vector<double>> priors;
    std::vector<ClusterCountDistribution> v;
    for (const auto& cl : clusters) {
      priors.push_back(oracle::random_simplex(std::size_t{1} << cl.size(), rng));
      ConfigState s;
      s.studies = cl;
      s.n_h = priors.back().size();
      for (Config h = 0; h < priors.back().size(); ++h) s.configs.push_back(h);
      s.probs = priors.back();
      v.push_back(cluster_count_distribution(s, lik));
    }
    const auto prior = oracle::clustered_prior(m, clusters, priors);
    for (int k = 1; k <= static_cast<int>(m); ++k) {
      const auto fdr = merge_clusters(v, k);
      for (std::size_t i = 0; i < lik.n; ++i) {
        merge_err = std::max(merge_err, std::fabs(fdr[i] - oracle::fdr_k(lik, i, prior, k)));
      }
    }
    for (double delta : {0.3, 0.5, 1.0}) {
      for (int d = 1; d <= static_cast<int>(clusters.size()); ++d) {
        const auto fdr = fdr_delta_d(v, delta, d);
        for (std::size_t i = 0; i < lik.n; ++i) {
          delta_err = std::max(delta_err,
                               std::fabs(fdr[i] - oracle::fdr_delta_d(lik, i, prior, clusters, delta, d)));
        }
      }
    }
  }
  Outcome o;
  o.pass = merge_err <= 1e-10 && delta_err <= 1e-10;
  o.details.push_back(fmt("50 instances, 2-3 clusters, m<=10: merge max err %.3g, fdr_delta_d max err %.3g (limit 1e-10)",
                          merge_err, delta_err));
  return o;
}

std::vector<double> dense_prior(const ConfigState& s) {
  std::vector<double> p(std::size_t{1} << s.l(), 0.0);
  for (std::size_t h = 0; h < s.configs.size(); ++h) p[s.configs[h]] = s.probs[h];
  return p;
}

void audit_state(const ConfigState& s) {
  for (const auto& r : s.rounds) g_audit.trace(r.loglik_trace);
}

// Zero preservation: zero initial weights stay exactly zero.
void audit_zero_preservation(const StudyLogLik& lik, std::mt19937_64& rng) {
  const std::size_t m = lik.m;
  const auto studies = oracle::iota_studies(m);
  std::vector<Config> configs(std::size_t{1} << m);
  for (Config h = 0; h < configs.size(); ++h) configs[h] = h;
  auto logl = config_log_likelihoods(lik, studies, configs);
  const std::size_t k = configs.size();
  for (std::size_t i = 0; i < lik.n; ++i) {
    double* row = logl.data() + i * k;
    const double mx = *std::max_element(row, row + k);
    for (std::size_t h = 0; h < k; ++h) row[h] = std::exp(row[h] - mx);
  }
  std::bernoulli_distribution drop(0.3);
  std::vector<double> init(k, 0.0);
  double s = 0.0;
  for (std::size_t h = 0; h < k; ++h) {
    if (h == 0 || !drop(rng)) s += (init[h] = 1.0);
  }
  for (double& p : init) p /= s;
  const auto res = em_restricted(logl, lik.n, init);
  g_audit.trace(res.loglik_trace);
  for (std::size_t h = 0; h < k; ++h) {
    if (init[h] == 0.0) {
      ++g_audit.zero_checks;
      if (res.probs[h] != 0.0) ++g_audit.zero_violations;
    }
  }
}

Outcome criterion3() {
  std::mt19937_64 rng(303);
  std::size_t cells = 0, violations = 0, instances_with_violation = 0;
  double worst_gap = 0.0, exact_err = 0.0;
  std::size_t fed_cells = 0, fed_violations = 0;
  for (int inst = 0; inst < 50; ++inst) {
    const auto lik = simulated_lik(400, 10, static_cast<std::uint64_t>(1000 + inst), inst % 3);
    const auto order = oracle::iota_studies(10);
    const auto full = restricted_em(lik, order, 1024);
    audit_state(full);
    const auto prior = dense_prior(full);
    std::vector<std::vector<double>> exact(lik.n);
    for (std::size_t i = 0; i < lik.n; ++i) {
      const auto counts = enumerated_counts(lik, i, prior);
      double cum = 0.0;
      for (std::size_t k = 1; k <= 10; ++k) exact[i].push_back(cum += counts[k - 1]);
    }
    for (int k = 1; k <= 10; ++k) {
      const auto ub = fdr_k_upper_bound(full, lik, k);
      for (std::size_t i = 0; i < lik.n; ++i) {
        exact_err = std::max(exact_err, std::fabs(ub[i] - exact[i][static_cast<std::size_t>(k - 1)]));
      }
    }
    bool any = false;
    for (std::size_t n_h : {16, 64}) {
      const auto pruned = restricted_em(lik, order, n_h);
      audit_state(pruned);
      // The same kept set fed with the full-capacity prior and its true
      // exclusion maximum: the setting the inequality is stated for.
      ConfigState fed = pruned;
      std::vector<bool> kept(prior.size(), false);
      for (std::size_t h = 0; h < fed.configs.size(); ++h) {
        fed.probs[h] = prior[fed.configs[h]];
        kept[fed.configs[h]] = true;
      }
      double eps = 0.0;
      for (std::size_t h = 0; h < prior.size(); ++h) {
        if (!kept[h]) eps = std::max(eps, prior[h]);
      }
      fed.exclusion_bound = eps;
      for (int k = 1; k <= 10; ++k) {
        const auto ub = fdr_k_upper_bound(pruned, lik, k);
        const auto ub_fed = fdr_k_upper_bound(fed, lik, k);
        for (std::size_t i = 0; i < lik.n; ++i) {
          const double e = exact[i][static_cast<std::size_t>(k - 1)];
          ++cells;
          ++fed_cells;
          if (ub[i] < e - 1e-12) {
            ++violations;
            any = true;
            worst_gap = std::max(worst_gap, e - ub[i]);
          }
          if (ub_fed[i] < e - 1e-12) ++fed_violations;
        }
      }
    }
    instances_with_violation += any;
    audit_zero_preservation(lik, rng);
  }
  Outcome o;
  o.pass = violations == 0 && exact_err <= 1e-10;
  o.details.push_back(fmt("50 simulated instances (m=10, n=400), n_H in {16,64}: %zu of %zu (gene,k) cells below the full-EM fdr_k (%.2f%%), in %zu instances; worst gap %.3g",
                          violations, cells, 100.0 * violations / cells, instances_with_violation, worst_gap));
  o.details.push_back(fmt("n_H = 2^m: max |UB - exact| = %.3g (limit 1e-10)", exact_err));
  o.details.push_back(fmt("bound fed the full-EM prior on the kept set and its true exclusion max: %zu of %zu cells violated",
                          fed_violations, fed_cells));
  if (violations > 0) {
    o.details.push_back("the pruned and full-capacity EMs are separate estimates; configurations the pruned run");
    o.details.push_back("discarded can receive more full-EM mass than its exclusion bound, so dominance is not guaranteed");
  }
  return o;
}

Outcome criterion4() {
  if (g_audit.zero_checks == 0) criterion3();  // populates the audit when run on its own
  // Two-groups fits behind the simulated instances of criterion 3.
  for (int inst = 0; inst < 50; inst += 5) {
    Scenario2Options so;
    so.n = 400;
    so.m = 10;
    so.seed = static_cast<std::uint64_t>(1000 + inst);
    const auto z = pvalues_to_zscores(simulate_scenario2(so).data, Tail::one_sided);
    for (std::size_t j = 0; j < z.n_studies(); ++j) {
      auto col = z.column(j);
      for (double& v : col) v = std::fabs(v);
      g_audit.trace(fit_normix(col).loglik_trace);
    }
  }
  Outcome o;
  o.pass = g_audit.fits > 0 && g_audit.violations == 0 && g_audit.zero_checks > 0 &&
           g_audit.zero_violations == 0;
  o.details.push_back(fmt("%zu EM runs audited: %zu log-likelihood decreases beyond 1e-10 (worst %.3g)",
                          g_audit.fits, g_audit.violations, g_audit.worst_drop));
  o.details.push_back(fmt("zero preservation: %zu zero-initialised weights, %zu became non-zero",
                          g_audit.zero_checks, g_audit.zero_violations));
  return o;
}

const BenchRow* find_median(const std::vector<BenchRow>& rows, BenchMethod method, int k) {
  for (const auto& r : rows) {
    if (r.seed == "median" && r.k == k && r.method == to_string(method)) return &r;
  }
  return nullptr;
}

Outcome criterion5() {
  BenchSpec spec;
  spec.scenario = "s1";
  spec.n = 5000;
  spec.m = 20;
  spec.x = 1000.0;
  spec.seeds.clear();
  for (std::uint64_t s = 1; s <= 10; ++s) spec.seeds.push_back(s);
  spec.methods = {BenchMethod::fisher, BenchMethod::screen_ind, BenchMethod::screen};
  spec.k_min = 2;
  spec.k_max = 5;
  const auto t0 = Clock::now();
  const auto rows = run_benchmark(spec);
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = secs < 20 * 60;
  for (int k = 2; k <= 5; ++k) {
    const auto* scr = find_median(rows, BenchMethod::screen, k);
    const auto* ind = find_median(rows, BenchMethod::screen_ind, k);
    const auto* fis = find_median(rows, BenchMethod::fisher, k);
    bool ok = scr->fdp <= 0.1 && ind->fdp <= 0.1;
    if (k <= 3) ok = ok && fis->fdp >= 0.25 && fis->jaccard <= 0.3;
    o.pass = o.pass && ok;
    o.details.push_back(fmt("k=%d median FDP: SCREEN %.3f, SCREEN-ind %.3f, Fisher %.3f | Jaccard: SCREEN %.3f, SCREEN-ind %.3f, Fisher %.3f",
                            k, scr->fdp, ind->fdp, fis->fdp, scr->jaccard, ind->jaccard, fis->jaccard));
  }
  o.details.push_back(fmt("runtime %.1f s for 10 seeds (limit 1200 s)", secs));
  return o;
}

Outcome criterion6() {
  Outcome o;
  int recovered = 0;
  double cluster_secs = 0.0;
  Partition planted;
  for (std::size_t c = 0; c < 4; ++c) {
    std::vector<std::size_t> block;
    for (std::size_t j = 0; j < 10; ++j) block.push_back(c * 10 + j);
    planted.push_back(block);
  }
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Scenario2Options so;
    so.n = 5000;
    so.m = 40;
    so.clusters = 4;
    so.r = 0.8;
    so.seed = seed;
    const auto z = pvalues_to_zscores(simulate_scenario2(so).data, Tail::one_sided);
    const auto models = fit_models(z);
    const auto lik = study_log_likelihoods(models, z);
    ClusterOptions co;
    co.seed = seed;
    const auto t0 = Clock::now();
    const auto c = cluster_studies(models, lik, co);
    cluster_secs += seconds_since(t0);
    const bool ok = c.clusters == planted;
    recovered += ok;
    if (!ok) o.details.push_back(fmt("seed %d: %zu clusters found", static_cast<int>(seed), c.clusters.size()));
  }
  double max_diff = 0.0;
  int single = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Scenario2Options so;
    so.n = 5000;
    so.m = 20;
    so.clusters = 1;
    so.r = 0.8;
    so.seed = seed;
    const auto z = pvalues_to_zscores(simulate_scenario2(so).data, Tail::one_sided);
    const auto models = fit_models(z);
    ScreenOptions opts;
    opts.k_min = 1;
    opts.k_max = 20;
    opts.cluster.seed = seed;
    const auto scr = screen_with_models(z, models, opts);
    single += scr.clustering.clusters.size() == 1;
    const auto ub = repfdr_ub(z, models, 1, 20);
    for (int k = 1; k <= 20; ++k) {
      for (std::size_t i = 0; i < z.n_genes(); ++i) {
        max_diff = std::max(max_diff, std::fabs(scr.table.at_k(k)[i] - ub.table.at_k(k)[i]));
      }
    }
  }
  o.pass = recovered >= 9 && max_diff <= 1e-6;
  o.details.insert(o.details.begin(),
                   fmt("M=4, r=0.8, m=40, n=5000: planted partition recovered in %d/10 seeds (need 9); clustering %.1f s total",
                       recovered, cluster_secs));
  o.details.push_back(fmt("M=1, r=0.8, m=20: single cluster found in %d/10 seeds; max |SCREEN - repfdr-UB| = %.3g (limit 1e-6)",
                          single, max_diff));
  return o;
}

Outcome criterion7() {
  BenchSpec spec;
  spec.scenario = "dense";
  spec.n = 5000;
  spec.seeds.clear();
  for (std::uint64_t s = 1; s <= 10; ++s) spec.seeds.push_back(s);
  spec.methods = {BenchMethod::screen};
  spec.k_min = 7;
  spec.k_max = 7;
  spec.null_mode = NullMode::theoretical;
  const auto theo = run_benchmark(spec);
  spec.null_mode = NullMode::empirical;
  const auto emp = run_benchmark(spec);
  const double jt = find_median(theo, BenchMethod::screen, 7)->jaccard;
  const double je = find_median(emp, BenchMethod::screen, 7)->jaccard;
  Outcome o;
  o.pass = jt >= 0.7 && jt > je;
  o.details.push_back(fmt("dense scenario, k=7, 10 seeds: median Jaccard theoretical null %.4f (need >= 0.7), empirical null %.4f (need strictly lower)",
                          jt, je));

  // Diagnostics for seed 1 (not part of the verdict): the estimated study clustering and
  // the score SCREEN reaches when handed the planted one.
  DenseOptions dopts;
  dopts.seed = 1;
  const auto sim = simulate_dense(dopts);
  const auto models = fit_models(sim.data);
  const auto lik = study_log_likelihoods(models, sim.data);
  ClusterOptions co;
  co.seed = 1;
  const auto found = cluster_studies(models, lik, co);
  std::string sizes;
  for (const auto& c : found.clusters) sizes += (sizes.empty() ? "" : ",") + std::to_string(c.size());
  double indep_r = 0.0;
  for (std::size_t i = 10; i < 20; ++i) {
    for (std::size_t j = i + 1; j < 20; ++j) indep_r += found.r(i, j) / 45.0;
  }
  StudyClustering planted = found;
  planted.clusters.clear();
  std::vector<std::size_t> block;
  for (std::size_t j = 0; j < 30; ++j) {
    if (j < 20) {
      planted.clusters.push_back({j});
    } else {
      block.push_back(j);
    }
  }
  planted.clusters.push_back(block);
  ScreenOptions so;
  so.k_min = so.k_max = 7;
  so.clustering = planted;
  const auto with_planted = screen_with_models(sim.data, models, so);
  const auto score =
      evaluate(select_at_cutoff(with_planted.table.at_k(7), 0.2), sim.truth_counts(), 7);
  o.details.push_back(fmt("seed 1 diagnostics: estimated cluster sizes {%s}; mean r among the 10 independent studies %.3f",
                          sizes.c_str(), indep_r));
  o.details.push_back(fmt("seed 1 diagnostics: SCREEN with the planted clustering reaches Jaccard %.4f",
                          score.jaccard));
  return o;
}

Outcome criterion8() {
  Scenario1Options so;
  so.n = 11540;
  so.m = 29;
  so.seed = 8;
  const auto sim = simulate_scenario1(so);
  const auto t0 = Clock::now();
  const auto z = pvalues_to_zscores(sim.data, Tail::one_sided);
  ScreenOptions opts;
  opts.k_min = 2;
  opts.k_max = 20;
  opts.cluster.seed = 8;
  const auto res = screen(z, opts);
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = secs < 30 * 60 && res.table.values.size() == 19 && res.table.gene_ids.size() == 11540;
  o.details.push_back(fmt("11540 x 29 stand-in, k=2..20: %.1f s end to end (limit 1800 s); fit %.1f, cluster %.1f, EM %.1f, merge %.1f",
                          secs, res.times.fit_seconds, res.times.cluster_seconds, res.times.em_seconds,
                          res.times.merge_seconds));
  o.details.push_back(fmt("%zu study clusters; %zu genes at fdr_2 <= 0.2, %zu at fdr_20 <= 0.2",
                          res.clustering.clusters.size(), select_at_cutoff(res.table.at_k(2), 0.2).size(),
                          select_at_cutoff(res.table.at_k(20), 0.2).size()));
  return o;
}

Outcome criterion9() {
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double fisher_err = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const double p = std::pow(u(rng), 4);
    if (p <= 0) continue;
    fisher_err = std::max(fisher_err, std::fabs(fisher_combined_pvalue(std::vector<double>{p}) - p));
  }
  std::size_t bh_mismatch = 0;
  for (int t = 0; t < 1000; ++t) {
    std::uniform_int_distribution<int> len(1, 120);
    std::vector<double> p(static_cast<std::size_t>(len(rng)));
    const bool ties = t % 2 == 0;
    for (double& x : p) x = ties ? std::round(u(rng) * 40.0) / 40.0 : std::pow(u(rng), 2);
    const auto q = bh_procedure(p);
    const auto ref = oracle::bh_reference(p);
    for (std::size_t i = 0; i < p.size(); ++i) bh_mismatch += q[i] != ref[i];
  }
  double exp_err = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    StatsMatrix z;
    z.scale = Scale::zscore;
    std::normal_distribution<double> normal(0.0, 2.0);
    for (int j = 0; j < 6; ++j) z.study_ids.push_back("s" + std::to_string(j));
    std::vector<TwoGroupsModel> models(6);
    for (std::size_t j = 0; j < 6; ++j) {
      models[j].study_id = z.study_ids[j];
      models[j].pi0 = 0.3 + 0.6 * u(rng);
      models[j].nonnull_mu = 0.5 + 3.0 * u(rng);
      models[j].nonnull_sigma = 0.5 + u(rng);
      models[j].power = estimate_power(models[j]);
    }
    for (int i = 0; i < 50; ++i) {
      z.gene_ids.push_back("g" + std::to_string(i));
      for (int j = 0; j < 6; ++j) z.values.push_back(normal(rng));
    }
    const auto res = exp_count(models, z);
    const auto lik = study_log_likelihoods(models, z);
    const auto prior = oracle::product_prior(lik.pi0);
    for (std::size_t i = 0; i < z.n_genes(); ++i) {
      exp_err = std::max(exp_err, std::fabs(res.statistic[i] - oracle::expected_count(lik, i, prior)));
    }
  }
  Outcome o;
  o.pass = fisher_err <= 1e-10 && bh_mismatch == 0 && exp_err <= 1e-10;
  o.details.push_back(fmt("Fisher m=1 identity max err %.3g (limit 1e-10)", fisher_err));
  o.details.push_back(fmt("BH vs quadratic reference on 1000 vectors: %zu values differ (need 0)", bh_mismatch));
  o.details.push_back(fmt("Exp-count vs enumeration (m=6, 20 instances): max err %.3g (limit 1e-10)", exp_err));
  return o;
}

Outcome criterion10() {
  auto screen_text = [](unsigned threads) {
    set_thread_count(threads);
    Scenario2Options so;
    so.n = 3000;
    so.m = 12;
    so.clusters = 2;
    so.seed = 10;
    const auto z = pvalues_to_zscores(simulate_scenario2(so).data, Tail::one_sided);
    ScreenOptions opts;
    opts.k_min = 1;
    opts.k_max = 12;
    opts.n_h = 64;
    opts.cluster.seed = 10;
    opts.cluster.bootstrap = 30;
    std::ostringstream out;
    write_fdr_table(out, screen(z, opts).table);
    write_fdr_table(out, repfdr_ub(z, fit_models(z), 1, 12, 32).table);
    return out.str();
  };
  auto bench_text = [](unsigned threads) {
    set_thread_count(threads);
    BenchSpec spec;
    spec.scenario = "s1";
    spec.n = 1500;
    spec.m = 8;
    spec.seeds = {3, 4};
    spec.bootstrap = 20;
    std::ostringstream out;
    const auto rows = run_benchmark(spec);
    write_bench_csv(out, rows);
    return out.str();
  };
  const auto a = screen_text(1), b = screen_text(4), c = screen_text(1);
  const auto ba = bench_text(1), bb = bench_text(3);
  set_thread_count(0);
  Outcome o;
  o.pass = a == b && a == c && ba == bb;
  o.details.push_back(fmt("SCREEN + repfdr-UB tables: 1 vs 4 threads %s, repeat run %s (%zu bytes)",
                          a == b ? "identical" : "DIFFER", a == c ? "identical" : "DIFFER", a.size()));
  o.details.push_back(fmt("benchmark CSV (all six methods): 1 vs 3 threads %s (%zu bytes)",
                          ba == bb ? "identical" : "DIFFER", ba.size()));
  return o;
}

}  // namespace
}  // namespace sfdr

int main(int argc, char** argv) {
  using namespace sfdr;
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all{
      {1, "exact DP matches enumeration", criterion1},
      {2, "cluster merge and fdr_delta_d match enumeration", criterion2},
      {3, "upper bound dominates full-capacity fdr_k", criterion3},
      {4, "EM monotonicity and zero preservation", criterion4},
      {5, "Scenario 1 reproduction", criterion5},
      {6, "Scenario 2 cluster recovery and M=1 equivalence", criterion6},
      {7, "dense-effects scenario", criterion7},
      {8, "real-data scale", criterion8},
      {9, "baseline correctness", criterion9},
      {10, "determinism across thread counts", criterion10},
  };
  std::vector<int> only;
  for (int a = 1; a < argc; ++a) only.push_back(std::atoi(argv[a]));
  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.details.push_back(std::string("exception: ") + e.what());
    }
    std::printf("[%s] criterion %d: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                seconds_since(t0));
    for (const auto& d : o.details) std::printf("       %s\n", d.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
