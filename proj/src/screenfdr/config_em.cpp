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
#include "screenfdr/config_em.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "screenfdr/error.hpp"
#include "screenfdr/normal.hpp"
#include "screenfdr/parallel.hpp"

namespace sfdr {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double dot4(const double* a, const double* b, std::size_t k) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t h = 0;
  for (; h + 4 <= k; h += 4) {
    s0 += a[h] * b[h];
    s1 += a[h + 1] * b[h + 1];
    s2 += a[h + 2] * b[h + 2];
    s3 += a[h + 3] * b[h + 3];
  }
  for (; h < k; ++h) s0 += a[h] * b[h];
  return (s0 + s1) + (s2 + s3);
}

// Per-gene exp(logL - max) so every row peaks at 1.
std::vector<double> normalize_rows(std::vector<double> log_lik, std::size_t n, std::size_t k) {
  for (std::size_t i = 0; i < n; ++i) {
    double* row = log_lik.data() + i * k;
    const double mx = *std::max_element(row, row + k);
    for (std::size_t h = 0; h < k; ++h) {
      row[h] = mx == kNegInf ? 0.0 : std::exp(row[h] - mx);
    }
  }
  return log_lik;
}

bool is_power_of_two(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }

std::size_t log2_exact(std::size_t x) {
  std::size_t r = 0;
  while ((std::size_t{1} << r) < x) ++r;
  return r;
}

void check_state_inputs(const StudyLogLik& lik, std::span<const std::size_t> studies,
                        std::size_t n_h) {
  require(is_power_of_two(n_h) && n_h >= 2, "n_H must be a power of two >= 2");
  require(studies.size() <= kMaxConfigStudies, "at most 64 studies per configuration state");
  for (std::size_t s : studies) require(s < lik.m, "study index out of range");
}

EmRound make_round(std::size_t l, std::size_t configs, const EmResult& em) {
  EmRound r;
  r.studies = l;
  r.configs = configs;
  r.iterations = em.iterations;
  r.converged = em.converged;
  r.loglik = em.loglik_trace.empty() ? 0.0 : em.loglik_trace.back();
  r.loglik_trace = em.loglik_trace;
  return r;
}

}  // namespace

bool lex_less(Config a, Config b) {
  const Config d = a ^ b;
  if (d == 0) return false;
  const Config low = d & (~d + 1);
  return (a & low) == 0;
}

EmResult em_restricted(std::span<const double> lik, std::size_t n,
                       std::span<const double> init, const EmOptions& opts) {
  const std::size_t k = init.size();
  require(k >= 1, "EM needs at least one configuration");
  require(lik.size() == n * k, "likelihood matrix does not match n x |H'|");
  double total = 0.0;
  for (double p : init) {
    require(p >= 0 && std::isfinite(p), "EM init must be non-negative");
    total += p;
  }
  require(std::fabs(total - 1.0) < 1e-9, "EM init must sum to 1");

  const std::size_t blocks = (n + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> block_acc(blocks * k);
  std::vector<double> block_ll(blocks);
  std::vector<std::size_t> block_used(blocks);

  // One EM map: returns the log-likelihood at `p` and writes the updated weights to `out`.
  // `used` counts genes with positive likelihood; when it is 0, `out` is left as `p`.
  auto em_map = [&](const std::vector<double>& p, std::vector<double>& out,
                    std::size_t& used) -> double {
    parallel_blocks(n, [&](std::size_t b0, std::size_t e0) {
      for (std::size_t b = b0; b < e0; b += kReduceBlock) {
        const std::size_t blk = b / kReduceBlock;
        const std::size_t e = std::min(e0, b + kReduceBlock);
        double* acc = block_acc.data() + blk * k;
        std::fill(acc, acc + k, 0.0);
        // log-likelihood as mantissa * 2^exponent: one log per block instead of per gene
        double mant = 1.0;
        long expo = 0;
        std::size_t blk_used = 0;
        for (std::size_t i = b; i < e; ++i) {
          const double* row = lik.data() + i * k;
          const double den = dot4(row, p.data(), k);
          if (!(den > 0)) continue;
          int ex = 0;
          mant = std::frexp(mant * den, &ex);
          expo += ex;
          ++blk_used;
          const double inv = 1.0 / den;
          for (std::size_t h = 0; h < k; ++h) acc[h] += row[h] * inv;
        }
        block_ll[blk] = std::log(mant) + static_cast<double>(expo) * std::numbers::ln2;
        block_used[blk] = blk_used;
      }
    });
    double ll = 0.0;
    used = 0;
    out.assign(k, 0.0);
    for (std::size_t blk = 0; blk < blocks; ++blk) {
      ll += block_ll[blk];
      used += block_used[blk];
      const double* acc = block_acc.data() + blk * k;
      for (std::size_t h = 0; h < k; ++h) out[h] += acc[h];
    }
    if (used == 0) {
      out = p;
      return ll;
    }
    // M-step: pi(h) <- pi(h) * mean_i lik(i,h) / f(Z_i), renormalized against rounding drift.
    double norm = 0.0;
    for (std::size_t h = 0; h < k; ++h) {
      out[h] *= p[h] / static_cast<double>(used);
      norm += out[h];
    }
    for (double& v : out) v /= norm;
    return ll;
  };
  auto converged = [&](double ll, double prev) {
    return std::fabs(ll - prev) < opts.rel_tol * std::max(1.0, std::fabs(prev));
  };

  EmResult res;
  std::vector<double> cur(init.begin(), init.end());
  std::vector<double> next;
  std::size_t used = 0;

  if (!opts.accelerate) {
    double prev_ll = 0.0;
    for (int it = 0;; ++it) {
      const double ll = em_map(cur, next, used);
      res.loglik_trace.push_back(ll);
      if (it > 0 && converged(ll, prev_ll)) {
        res.converged = true;
        break;
      }
      if (it >= opts.max_iter || used == 0) break;
      prev_ll = ll;
      cur.swap(next);
      res.iterations = it + 1;
    }
    res.probs = std::move(cur);
    return res;
  }

  // Squared extrapolation: two EM maps give r = F(p) - p and v = F(F(p)) - 2F(p) + p, the
  // extrapolated point p - 2a r + a^2 v is kept only if it is a valid distribution that does
  // not lower the likelihood; otherwise the plain double step F(F(p)) is used.
  std::vector<double> p1, p2, pa(k), fa;
  double ll0 = em_map(cur, p1, used);
  res.loglik_trace.push_back(ll0);
  int maps = 1;
  while (used > 0 && maps < opts.max_iter) {
    const double ll1 = em_map(p1, p2, used);
    ++maps;
    double sr = 0.0, sv = 0.0;
    for (std::size_t h = 0; h < k; ++h) {
      const double r = p1[h] - cur[h];
      const double v = p2[h] - 2.0 * p1[h] + cur[h];
      sr += r * r;
      sv += v * v;
    }
    bool take_extrapolated = false;
    double ll = ll1;
    if (sv > 0.0) {
      const double a = std::min(-1.0, -std::sqrt(sr / sv));
      bool valid = true;
      for (std::size_t h = 0; h < k; ++h) {
        const double r = p1[h] - cur[h];
        const double v = p2[h] - 2.0 * p1[h] + cur[h];
        pa[h] = cur[h] - 2.0 * a * r + a * a * v;
        if (!(pa[h] >= 0.0)) valid = false;
      }
      if (valid) {
        const double s = std::accumulate(pa.begin(), pa.end(), 0.0);
        for (double& x : pa) x /= s;
        const double lla = em_map(pa, fa, used);
        ++maps;
        if (std::isfinite(lla) && lla >= ll1) {
          take_extrapolated = true;
          ll = lla;
        }
      }
    }
    if (take_extrapolated) {
      cur.swap(pa);
      p1.swap(fa);
    } else {
      cur.swap(p2);
      ll = em_map(cur, p1, used);
      ++maps;
    }
    res.loglik_trace.push_back(ll);
    const bool done = converged(ll, ll0);
    ll0 = ll;
    if (done) {
      res.converged = true;
      break;
    }
  }
  res.iterations = maps;
  res.probs = std::move(cur);
  return res;
}

std::vector<double> config_log_likelihoods(const StudyLogLik& lik,
                                           std::span<const std::size_t> studies,
                                           std::span<const Config> configs) {
  const std::size_t k = configs.size();
  std::vector<double> out(lik.n * k);
  parallel_blocks(lik.n, [&](std::size_t b, std::size_t e) {
    std::vector<double> l0(studies.size()), l1(studies.size());
    for (std::size_t i = b; i < e; ++i) {
      for (std::size_t s = 0; s < studies.size(); ++s) {
        l0[s] = lik.lf0(i, studies[s]);
        l1[s] = lik.lf1(i, studies[s]);
      }
      double* row = out.data() + i * k;
      for (std::size_t h = 0; h < k; ++h) {
        const Config c = configs[h];
        double v = 0.0;
        for (std::size_t s = 0; s < studies.size(); ++s) v += ((c >> s) & 1) ? l1[s] : l0[s];
        row[h] = v;
      }
    }
  });
  return out;
}

ConfigState initial_state(const StudyLogLik& lik, std::span<const std::size_t> studies,
                          std::size_t n_h, const EmOptions& opts) {
  check_state_inputs(lik, studies, n_h);
  const std::size_t l = studies.size();
  require((std::size_t{1} << l) <= n_h, "initial state needs 2^l <= n_H");
  ConfigState state;
  state.studies.assign(studies.begin(), studies.end());
  state.n_h = n_h;
  const std::size_t k = std::size_t{1} << l;
  state.configs.resize(k);
  std::vector<double> init(k);
  for (std::size_t h = 0; h < k; ++h) {
    state.configs[h] = static_cast<Config>(h);
    double p = 1.0;
    for (std::size_t s = 0; s < l; ++s) {
      const double pi0 = lik.pi0[studies[s]];
      p *= ((h >> s) & 1) ? 1.0 - pi0 : pi0;
    }
    init[h] = p;
  }
  const double total = std::accumulate(init.begin(), init.end(), 0.0);
  for (double& p : init) p /= total;
  const auto norm_lik = normalize_rows(config_log_likelihoods(lik, studies, state.configs), lik.n, k);
  auto em = em_restricted(norm_lik, lik.n, init, opts);
  state.probs = std::move(em.probs);
  state.coverage = 1.0;
  state.exclusion_bound = 0.0;
  state.rounds.push_back(make_round(l, k, em));
  state.probs.shrink_to_fit();
  return state;
}

ConfigState absorb_study(const ConfigState& state, const StudyLogLik& lik, std::size_t study,
                         bool prune, const EmOptions& opts) {
  require(study < lik.m, "study index out of range");
  require(state.l() < kMaxConfigStudies, "at most 64 studies per configuration state");
  require(std::find(state.studies.begin(), state.studies.end(), study) == state.studies.end(),
          "study already absorbed");
  require(!state.configs.empty() && state.configs.size() == state.probs.size(),
          "configuration state is empty or inconsistent");
  ConfigState next;
  next.studies = state.studies;
  next.studies.push_back(study);
  next.n_h = state.n_h;
  const std::size_t bit = state.l();
  const std::size_t parents = state.configs.size();
  const std::size_t k = 2 * parents;

  std::vector<Config> ext(k);
  std::vector<double> init(k);
  const double parent_total = std::accumulate(state.probs.begin(), state.probs.end(), 0.0);
  require(parent_total > 0, "configuration state has no probability mass");
  for (std::size_t p = 0; p < parents; ++p) {
    ext[2 * p] = state.configs[p];
    ext[2 * p + 1] = state.configs[p] | (Config{1} << bit);
    init[2 * p] = init[2 * p + 1] = 0.5 * state.probs[p] / parent_total;
  }

  const auto norm_lik = normalize_rows(config_log_likelihoods(lik, next.studies, ext), lik.n, k);
  auto em = em_restricted(norm_lik, lik.n, init, opts);
  next.rounds = state.rounds;
  next.rounds.push_back(make_round(next.l(), k, em));

  // (1) rescale by the previous coverage.
  std::vector<double> probs = std::move(em.probs);
  for (double& p : probs) p *= state.coverage;

  const std::size_t keep = next.n_h / 2;
  if (!prune || k <= keep) {
    next.configs = std::move(ext);
    next.probs = std::move(probs);
    next.coverage = std::accumulate(next.probs.begin(), next.probs.end(), 0.0);
    next.exclusion_bound = state.exclusion_bound;
    return next;
  }
  // (2) keep the top n_H/2 configurations.
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (probs[a] != probs[b]) return probs[a] > probs[b];
    return lex_less(ext[a], ext[b]);
  });
  std::vector<std::size_t> kept(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(keep));
  std::sort(kept.begin(), kept.end());
  double max_dropped = 0.0;
  for (std::size_t r = keep; r < k; ++r) max_dropped = std::max(max_dropped, probs[idx[r]]);
  next.configs.reserve(keep);
  next.probs.reserve(keep);
  for (std::size_t r : kept) {
    next.configs.push_back(ext[r]);
    next.probs.push_back(probs[r]);
  }
  // (3) coverage, (4) exclusion bound.
  next.coverage = std::accumulate(next.probs.begin(), next.probs.end(), 0.0);
  next.exclusion_bound = std::max(state.exclusion_bound, max_dropped);
  return next;
}

ConfigState restricted_em(const StudyLogLik& lik, std::span<const std::size_t> order,
                          std::size_t n_h, const EmOptions& opts) {
  check_state_inputs(lik, order, n_h);
  require(!order.empty(), "restricted EM needs at least one study");
  const std::size_t m = order.size();
  if (m < 63 && (std::size_t{1} << m) <= n_h) return initial_state(lik, order, n_h, opts);
  const std::size_t l0 = log2_exact(n_h) - 1;
  ConfigState state = initial_state(lik, order.first(l0), n_h, opts);
  for (std::size_t s = l0; s < m; ++s) {
    state = absorb_study(state, lik, order[s], /*prune=*/s + 1 < m, opts);
  }
  return state;
}

std::vector<std::size_t> order_by_power(std::span<const double> power) {
  std::vector<std::size_t> idx(power.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return power[a] > power[b]; });
  return idx;
}

void count_cdf_upper_bound(const ConfigState& state, const StudyLogLik& lik, std::size_t gene,
                           std::span<double> bound) {
  const std::size_t width = bound.size();
  const std::size_t l = state.l();
  const std::size_t k = state.configs.size();
  const double eps = state.exclusion_bound;
  if (width == 0) return;

  // log P(Z|h) for the kept configurations, shifted by their maximum.
  std::vector<double> log_l(k);
  double shift = kNegInf;
  for (std::size_t h = 0; h < k; ++h) {
    double v = 0.0;
    const Config c = state.configs[h];
    for (std::size_t s = 0; s < l; ++s) {
      v += ((c >> s) & 1) ? lik.lf1(gene, state.studies[s]) : lik.lf0(gene, state.studies[s]);
    }
    log_l[h] = v;
    shift = std::max(shift, v);
  }
  std::vector<double> in_set(width, 0.0);
  double den = 0.0;
  for (std::size_t h = 0; h < k; ++h) {
    const double w = std::exp(log_l[h] - shift);
    den += w * state.probs[h];
    const auto c = static_cast<std::size_t>(popcount(state.configs[h]));
    if (c < width) in_set[c] += w * (state.probs[h] - eps);
  }

  // eps * sum over all configurations with |h| = c of P(Z|h), by the count DP
  // with per-study rescaling.
  std::vector<double> all(width, 0.0);
  double log_scale = 0.0;
  if (eps > 0) {
    all[0] = 1.0;
    for (std::size_t s = 0; s < l; ++s) {
      const double a = lik.lf0(gene, state.studies[s]);
      const double b = lik.lf1(gene, state.studies[s]);
      const double mx = std::max(a, b);
      const double w0 = std::exp(a - mx);
      const double w1 = std::exp(b - mx);
      log_scale += mx;
      const std::size_t top = std::min(width - 1, s + 1);
      for (std::size_t c = top; c > 0; --c) all[c] = w0 * all[c] + w1 * all[c - 1];
      all[0] *= w0;
      const double peak = *std::max_element(all.begin(), all.end());
      if (peak > 0) {
        for (double& v : all) v /= peak;
        log_scale += std::log(peak);
      }
    }
  }

  double num = 0.0, all_cum = 0.0;
  const double log_den = std::log(den);
  for (std::size_t c = 0; c < width; ++c) {
    num += in_set[c];
    double value = num / den;
    if (eps > 0) {
      all_cum += all[c];
      if (all_cum > 0) {
        value += std::exp(std::log(eps) + std::log(all_cum) + log_scale - shift - log_den);
      }
    }
    bound[c] = std::max(0.0, value);
  }
}

FdrTable fdr_upper_bound_range(const ConfigState& state, const StudyLogLik& lik,
                               const std::vector<std::string>& gene_ids, int k_min, int k_max) {
  require(state.l() == lik.m, "upper bound needs a state covering every study");
  const int m = static_cast<int>(lik.m);
  if (k_min < 1 || k_max < k_min || k_max > m) {
    fail(ErrorCode::out_of_range, "k range [" + std::to_string(k_min) + "," +
                                      std::to_string(k_max) + "] outside [1," +
                                      std::to_string(m) + "]");
  }
  require(gene_ids.size() == lik.n, "gene id count does not match likelihood rows");
  FdrTable table;
  table.gene_ids = gene_ids;
  table.k_min = k_min;
  table.k_max = k_max;
  table.method = FdrMethod::repfdr_ub;
  table.values.assign(static_cast<std::size_t>(k_max - k_min + 1), std::vector<double>(lik.n));
  parallel_blocks(lik.n, [&](std::size_t b, std::size_t e) {
    std::vector<double> bound(static_cast<std::size_t>(k_max));
    for (std::size_t i = b; i < e; ++i) {
      count_cdf_upper_bound(state, lik, i, bound);
      for (int kk = k_min; kk <= k_max; ++kk) {
        table.values[static_cast<std::size_t>(kk - k_min)][i] = bound[static_cast<std::size_t>(kk - 1)];
      }
    }
  });
  return table;
}

std::vector<double> fdr_k_upper_bound(const ConfigState& state, const StudyLogLik& lik, int k) {
  std::vector<std::string> ids(lik.n);
  return fdr_upper_bound_range(state, lik, ids, k, k).values.front();
}

}  // namespace sfdr
