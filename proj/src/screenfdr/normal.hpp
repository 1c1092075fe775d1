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

// Thin wrappers over Boost.Math for the standard normal and chi-square.

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace sfdr::stats {

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;

inline double log_phi(double x) { return -0.5 * x * x - kLogSqrt2Pi; }
inline double phi(double x) { return std::exp(log_phi(x)); }

inline double norm_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}
inline double norm_sf(double x) {
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

// Upper-tail quantile: returns z with P(Z > z) = q.
inline double norm_isf(double q) {
  static const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(boost::math::complement(standard, q));
}

inline double norm_ppf(double p) {
  static const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, p);
}

// Survival function of chi-square with df degrees of freedom.
inline double chisq_sf(double x, double df) {
  if (x <= 0) return 1.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

}  // namespace sfdr::stats
