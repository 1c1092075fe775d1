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
#include "screenfdr/two_groups.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "screenfdr/error.hpp"
#include "screenfdr/normal.hpp"

namespace sfdr {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double x) { return x > 0 ? std::log(x) : kNegInf; }

// log of (1-pi0) f1 / (pi0 f0 + (1-pi0) f1) given the log terms.
double log_share(double log_a, double log_b) {
  return log_b - stats::log_add_exp(log_a, log_b);
}

// P(X > 0 | |X| = z) for X ~ N(mu, sigma^2).
double positive_sign_weight(double z, double mu, double sigma) {
  return 1.0 / (1.0 + std::exp(-2.0 * z * mu / (sigma * sigma)));
}

// Pairwise summation keeps the log-likelihood independent of chunking.
double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

}  // namespace

std::string_view to_string(NullMode mode) {
  return mode == NullMode::theoretical ? "theoretical" : "empirical";
}

NullMode parse_null_mode(std::string_view s) {
  if (s == "theoretical") return NullMode::theoretical;
  if (s == "empirical") return NullMode::empirical;
  fail(ErrorCode::invalid_argument, "unknown null mode '" + std::string(s) + "'");
}

double log_density_null(const TwoGroupsModel& m, double z) {
  z = std::fabs(z);
  return std::log(2.0) + stats::log_phi(z / m.null_sigma) - std::log(m.null_sigma);
}

double log_density_nonnull_raw(const TwoGroupsModel& m, double z) {
  z = std::fabs(z);
  const double s = m.nonnull_sigma;
  // phi((z-mu)/s) + phi((z+mu)/s) = phi((z-mu)/s) * (1 + exp(-2 z mu / s^2))
  return stats::log_phi((z - m.nonnull_mu) / s) +
         std::log1p(std::exp(-2.0 * z * m.nonnull_mu / (s * s))) - std::log(s);
}

double log_density_nonnull_shrunk(const TwoGroupsModel& m, double z) {
  return safe_log(m.power) + log_density_nonnull_raw(m, z);
}

double density_null(const TwoGroupsModel& m, double z) {
  return std::exp(log_density_null(m, z));
}

double density_nonnull_raw(const TwoGroupsModel& m, double z) {
  return std::exp(log_density_nonnull_raw(m, z));
}

double density_nonnull_shrunk(const TwoGroupsModel& m, double z) {
  return m.power * density_nonnull_raw(m, z);
}

double density_marginal(const TwoGroupsModel& m, double z) {
  return m.pi0 * density_null(m, z) + (1.0 - m.pi0) * density_nonnull_raw(m, z);
}

double marginal_tdr(const TwoGroupsModel& m, double z) {
  const double a = safe_log(m.pi0) + log_density_null(m, z);
  const double b = safe_log(1.0 - m.pi0) + log_density_nonnull_shrunk(m, z);
  if (b == kNegInf) return 0.0;
  if (a == kNegInf) return 1.0;
  return std::exp(log_share(a, b));
}

double local_fdr(const TwoGroupsModel& m, double z) { return 1.0 - marginal_tdr(m, z); }

double estimate_power(const TwoGroupsModel& m) {
  if (m.pi0 >= 1.0) return 0.0;
  if (m.pi0 <= 0.0) return 1.0;
  const double log_pi0 = std::log(m.pi0);
  const double log_pi1 = std::log1p(-m.pi0);
  auto integrand = [&](double z) {
    const double l1 = log_density_nonnull_raw(m, z);
    const double a = log_pi0 + log_density_null(m, z);
    const double b = log_pi1 + l1;
    return std::exp(l1 + log_share(a, b));
  };
  // Split at the non-null mode so the peak is never straddled by a coarse panel.
  const double upper =
      std::max(m.nonnull_mu + 40.0 * m.nonnull_sigma, 40.0 * m.null_sigma);
  const double mid = std::clamp(m.nonnull_mu, 0.0, upper);
  using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
  double total = 0.0;
  if (mid > 0.0) total += Quad::integrate(integrand, 0.0, mid, 20, 1e-12);
  total += Quad::integrate(integrand, mid, upper, 20, 1e-12);
  return std::clamp(total, 0.0, 1.0);
}

NormixFit fit_normix(std::span<const double> z_abs, const NormixOptions& opts) {
  const std::size_t n = z_abs.size();
  if (n < kNormixMinSamples) {
    fail(ErrorCode::invalid_argument,
         "normix needs at least " + std::to_string(kNormixMinSamples) +
             " values, got " + std::to_string(n));
  }
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(z_abs[i]) || z_abs[i] < 0) {
      fail(ErrorCode::invalid_argument, "normix input must be finite and non-negative");
    }
    z[i] = z_abs[i];
  }

  TwoGroupsModel model;
  model.null_mode = opts.null_mode;
  model.pi0 = std::clamp(opts.pi0_init, opts.pi0_min, 1.0 - opts.pi0_min);
  {
    std::vector<double> sorted = z;
    const auto k = static_cast<std::size_t>(std::floor(0.9 * static_cast<double>(n - 1)));
    std::nth_element(sorted.begin(), sorted.begin() + k, sorted.end());
    model.nonnull_mu = std::max(sorted[k], opts.mu_min);
  }
  model.nonnull_sigma = 1.0;
  model.null_sigma = 1.0;

  std::vector<double> resp(n), logf(n), sign_w(n);

  // E-step and observed log-likelihood at the current parameters.
  auto e_step = [&](const TwoGroupsModel& p) {
    const double lp0 = std::log(p.pi0);
    const double lp1 = std::log1p(-p.pi0);
    for (std::size_t i = 0; i < n; ++i) {
      const double a = lp0 + log_density_null(p, z[i]);
      const double b = lp1 + log_density_nonnull_raw(p, z[i]);
      logf[i] = stats::log_add_exp(a, b);
      resp[i] = std::exp(b - logf[i]);
      sign_w[i] = positive_sign_weight(z[i], p.nonnull_mu, p.nonnull_sigma);
    }
    return pairwise_sum(logf.data(), n);
  };

  NormixFit fit;
  double ll = e_step(model);
  fit.loglik_trace.push_back(ll);
  bool converged = false;
  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    // M-step. Each coordinate update is the maximizer of the expected
    // complete-data log-likelihood projected onto its bound, which is also the
    // constrained maximizer because each objective is unimodal.
    double r_sum = 0.0, null_sum = 0.0, null_sq = 0.0, signed_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      r_sum += resp[i];
      null_sum += 1.0 - resp[i];
      null_sq += (1.0 - resp[i]) * z[i] * z[i];
      signed_sum += resp[i] * (2.0 * sign_w[i] - 1.0) * z[i];
    }
    TwoGroupsModel next = model;
    next.pi0 = std::clamp(null_sum / static_cast<double>(n), opts.pi0_min, 1.0 - opts.pi0_min);
    if (opts.null_mode == NullMode::empirical && null_sum > 0) {
      next.null_sigma = std::max(1.0, std::sqrt(null_sq / null_sum));
    }
    if (r_sum > 0) {
      next.nonnull_mu = std::max(opts.mu_min, signed_sum / r_sum);
      double var = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double dp = z[i] - next.nonnull_mu;
        const double dm = z[i] + next.nonnull_mu;
        var += resp[i] * (sign_w[i] * dp * dp + (1.0 - sign_w[i]) * dm * dm);
      }
      next.nonnull_sigma = std::max(opts.sigma_min, std::sqrt(var / r_sum));
    }
    model = next;
    const double ll_next = e_step(model);
    fit.loglik_trace.push_back(ll_next);
    const double change = std::fabs(ll_next - ll) / std::max(1.0, std::fabs(ll));
    ll = ll_next;
    if (change < opts.rel_tol) {
      converged = true;
      ++iter;
      break;
    }
  }
  model.loglik = ll;
  model.iterations = iter;
  model.converged = converged;
  model.degenerate = model.pi0 <= opts.pi0_min * (1 + 1e-12) ||
                     model.pi0 >= (1.0 - opts.pi0_min) * (1 - 1e-12);
  model.power = estimate_power(model);
  fit.model = model;
  return fit;
}

}  // namespace sfdr
