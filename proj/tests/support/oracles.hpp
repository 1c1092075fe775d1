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
// Reference implementations used only by tests. They enumerate configurations
// or integrate numerically and share no code with the library algorithms.
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "screenfdr/likelihood.hpp"

namespace sfdr::oracle {

// Random per-study log densities and priors.
inline StudyLogLik random_lik(std::size_t n, std::size_t m, std::mt19937_64& rng,
                              double spread = 2.0) {
  std::normal_distribution<double> normal(0.0, spread);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  StudyLogLik lik;
  lik.n = n;
  lik.m = m;
  lik.log_f0.resize(n * m);
  lik.log_f1.resize(n * m);
  for (std::size_t j = 0; j < m; ++j) lik.pi0.push_back(unif(rng));
  for (std::size_t i = 0; i < n * m; ++i) {
    lik.log_f0[i] = normal(rng) - 1.0;
    lik.log_f1[i] = normal(rng) - 1.0;
  }
  return lik;
}

inline int bits(std::uint64_t h) { return __builtin_popcountll(h); }

// P(Z_i | h) over the listed studies; bit b of h <-> studies[b].
inline double config_likelihood(const StudyLogLik& lik, std::size_t gene,
                                const std::vector<std::size_t>& studies, std::uint64_t h) {
  double s = 0.0;
  for (std::size_t b = 0; b < studies.size(); ++b) {
    s += ((h >> b) & 1) ? lik.lf1(gene, studies[b]) : lik.lf0(gene, studies[b]);
  }
  return std::exp(s);
}

inline std::vector<std::size_t> iota_studies(std::size_t m) {
  std::vector<std::size_t> s(m);
  for (std::size_t j = 0; j < m; ++j) s[j] = j;
  return s;
}

// Posterior over all 2^m configurations of one gene under an arbitrary prior.
inline std::vector<double> posterior(const StudyLogLik& lik, std::size_t gene,
                                     const std::vector<double>& prior) {
  const auto studies = iota_studies(lik.m);
  std::vector<double> post(prior.size());
  double den = 0.0;
  for (std::uint64_t h = 0; h < prior.size(); ++h) {
    post[h] = prior[h] * config_likelihood(lik, gene, studies, h);
    den += post[h];
  }
  for (double& p : post) p /= den;
  return post;
}

inline std::vector<double> product_prior(const std::vector<double>& pi0) {
  const std::size_t m = pi0.size();
  std::vector<double> prior(std::size_t{1} << m);
  for (std::uint64_t h = 0; h < prior.size(); ++h) {
    double p = 1.0;
    for (std::size_t j = 0; j < m; ++j) p *= ((h >> j) & 1) ? 1.0 - pi0[j] : pi0[j];
    prior[h] = p;
  }
  return prior;
}

// Posterior probability that fewer than k studies are non-null.
inline double fdr_k(const StudyLogLik& lik, std::size_t gene, const std::vector<double>& prior,
                    int k) {
  const auto post = posterior(lik, gene, prior);
  double s = 0.0;
  for (std::uint64_t h = 0; h < post.size(); ++h) {
    if (bits(h) < k) s += post[h];
  }
  return s;
}

// Product over clusters of per-cluster priors, indexed by global configuration.
// cluster_prior[c][local] with local bit b <-> clusters[c][b].
inline std::vector<double> clustered_prior(
    std::size_t m, const std::vector<std::vector<std::size_t>>& clusters,
    const std::vector<std::vector<double>>& cluster_prior) {
  std::vector<double> prior(std::size_t{1} << m);
  for (std::uint64_t h = 0; h < prior.size(); ++h) {
    double p = 1.0;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      std::uint64_t local = 0;
      for (std::size_t b = 0; b < clusters[c].size(); ++b) {
        if ((h >> clusters[c][b]) & 1) local |= std::uint64_t{1} << b;
      }
      p *= cluster_prior[c][local];
    }
    prior[h] = p;
  }
  return prior;
}

inline std::vector<double> random_simplex(std::size_t k, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(k);
  double s = 0.0;
  for (double& x : v) s += (x = e(rng));
  for (double& x : v) x /= s;
  return v;
}

// Posterior probability that fewer than d clusters reach ceil(delta*|C|) non-nulls.
inline double fdr_delta_d(const StudyLogLik& lik, std::size_t gene,
                          const std::vector<double>& prior,
                          const std::vector<std::vector<std::size_t>>& clusters, double delta,
                          int d) {
  const auto post = posterior(lik, gene, prior);
  double s = 0.0;
  for (std::uint64_t h = 0; h < post.size(); ++h) {
    int interesting = 0;
    for (const auto& cl : clusters) {
      int c = 0;
      for (std::size_t st : cl) c += (h >> st) & 1;
      if (c >= static_cast<int>(std::ceil(delta * cl.size() - 1e-12))) ++interesting;
    }
    if (interesting < d) s += post[h];
  }
  return s;
}

// E[number of non-null studies | Z] by enumeration.
inline double expected_count(const StudyLogLik& lik, std::size_t gene,
                             const std::vector<double>& prior) {
  const auto post = posterior(lik, gene, prior);
  double s = 0.0;
  for (std::uint64_t h = 0; h < post.size(); ++h) s += bits(h) * post[h];
  return s;
}

// Chi-square survival with even degrees of freedom 2m in closed form.
inline double chisq_sf_even(double x, int m) {
  double term = 1.0, sum = 1.0;
  for (int i = 1; i < m; ++i) {
    term *= (x / 2.0) / i;
    sum += term;
  }
  return std::exp(-x / 2.0) * sum;
}

// Composite Simpson rule on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline double std_normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }
inline double std_normal_sf(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// P(X >= tau, Y >= tau) for a standard bivariate normal with correlation r < 1.
inline double orthant_probability(double tau, double r) {
  const double s = std::sqrt(1.0 - r * r);
  return simpson([&](double x) { return std_normal_pdf(x) * std_normal_sf((tau - r * x) / s); },
                 tau, tau + 12.0, 20000);
}

// Quadratic-time BH: q_i = min over j with p_j >= p_i of p_j * n / rank_j.
inline std::vector<double> bh_reference(const std::vector<double>& p) {
  const std::size_t n = p.size();
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) {
    double best = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (p[j] < p[i]) continue;
      std::size_t rank = 0;  // number of p-values <= p_j
      for (std::size_t t = 0; t < n; ++t) rank += p[t] <= p[j];
      best = std::min(best, p[j] * static_cast<double>(n) / static_cast<double>(rank));
    }
    q[i] = best;
  }
  return q;
}

}  // namespace sfdr::oracle
