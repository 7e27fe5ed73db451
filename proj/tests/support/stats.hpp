// Copyright 2026 The electree authors
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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace electree::test {

/// Kolmogorov distribution quantile for alpha = 0.01: the asymptotic
/// critical D is kKs01 / sqrt(N) (one sample) or kKs01 * sqrt((n+m)/(nm))
/// (two samples).
inline constexpr double kKs01 = 1.6276236;

inline double ks_statistic(std::vector<double> samples,
                           const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::max(f - static_cast<double>(i) / n,
                             static_cast<double>(i + 1) / n - f));
  }
  return d;
}

inline bool ks_pass(std::vector<double> samples, const std::function<double(double)>& cdf) {
  const double n = static_cast<double>(samples.size());
  return ks_statistic(std::move(samples), cdf) <= kKs01 / std::sqrt(n);
}

inline double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

inline bool ks_pass_two_sample(std::vector<double> a, std::vector<double> b) {
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double crit = kKs01 * std::sqrt((na + nb) / (na * nb));
  return ks_statistic_two_sample(std::move(a), std::move(b)) <= crit;
}

/// Adaptive Simpson quadrature, used to rebuild reference probabilities from
/// bare density formulas.
namespace detail {
inline double simpson(const std::function<double(double)>& f, double a, double fa, double b,
                      double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}
inline double integrate_rec(const std::function<double(double)>& f, double a, double fa,
                            double b, double fb, double m, double fm, double whole, double tol,
                            int depth) {
  const double lm = (a + m) / 2.0, rm = (m + b) / 2.0;
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, lm, flm);
  const double right = simpson(f, m, fm, b, fb, rm, frm);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return integrate_rec(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) +
         integrate_rec(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1);
}
}  // namespace detail

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
  const double m = (a + b) / 2.0;
  const double fa = f(a), fb = f(b), fm = f(m);
  return detail::integrate_rec(f, a, fa, b, fb, m, fm, detail::simpson(f, a, fa, b, fb, m, fm),
                               tol, 48);
}

/// z-score of an observed proportion against an expected one under the
/// binomial null.
inline double proportion_z(double expected, double observed, double samples) {
  const double se = std::sqrt(expected * (1.0 - expected) / samples);
  return se == 0.0 ? (observed == expected ? 0.0 : 1e18) : (observed - expected) / se;
}

}  // namespace electree::test
