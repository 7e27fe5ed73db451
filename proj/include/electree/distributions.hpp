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

#include <cmath>
#include <cstdint>
#include <string>
#include <variant>

#include "electree/error.hpp"
#include "electree/rng.hpp"

namespace electree {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoOverPi = 0.63661977236758134307553505349006;

/// Exponential with the given rate: P(X > x) = exp(-rate * x).
inline double sample_exponential(RngStream& rng, double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw Error(ErrorCode::bad_parameter, "exponential rate must be positive");
  // Inversion: u in [0,1), so 1-u in (0,1] and the draw is finite.
  return -std::log1p(-rng.next_double()) / rate;
}

/// Maximum of n i.i.d. unit-rate exponentials; CDF (1 - exp(-x))^n.
/// n = 0 is the point mass at 0.
inline double sample_max_exp(RngStream& rng, std::int64_t n) {
  if (n < 0) throw Error(ErrorCode::bad_parameter, "max-exp count must be >= 0");
  if (n == 0) return 0.0;
  const double u = rng.next_double();
  // Inverse CDF, written so that u^(1/n) close to 1 keeps full precision:
  // 1 - u^(1/n) = -expm1(log(u)/n).
  if (u == 0.0) return 0.0;
  return -std::log(-std::expm1(std::log(u) / static_cast<double>(n)));
}

/// Sum of k independent exponentials with rates n+1, n+2, ..., n+k.
/// Sampled as the literal sum of k inversion draws; k = 0 is identically 0.
/// Together with sample_max_exp this realizes the max/sum identity
/// M_{n+k} = M_n + Y[n,k] in distribution.
inline double sample_sum_exp_seq(RngStream& rng, std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0)
    throw Error(ErrorCode::bad_parameter, "sum-exp-seq parameters must be >= 0");
  double total = 0.0;
  for (std::int64_t i = 1; i <= k; ++i)
    total += sample_exponential(rng, static_cast<double>(n + i));
  return total;
}

/// Stable law of index 1/2 (Levy): density exp(-1/(2t)) / sqrt(2 pi t^3) on
/// t > 0. Sampled exactly as 1/Z^2 for a standard normal Z.
inline double sample_stable_half(RngStream& rng) {
  for (;;) {
    const double u1 = rng.next_double_open();
    const double u2 = rng.next_double();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    if (z != 0.0) return 1.0 / (z * z);
  }
}

namespace detail {

// Knuth's product-of-uniforms method; exact for small means.
inline std::int64_t sample_poisson_knuth(RngStream& rng, double mean) {
  const double limit = std::exp(-mean);
  std::int64_t k = 0;
  double prod = rng.next_double_open();
  while (prod > limit) {
    ++k;
    prod *= rng.next_double_open();
  }
  return k;
}

}  // namespace detail

/// Poisson draw with the given mean; mean = 0 returns 0 deterministically.
/// Large means are split into chunks of at most 16 (sums of independent
/// Poissons are Poisson), keeping the method exact at any mean.
inline std::int64_t sample_poisson(RngStream& rng, double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean))
    throw Error(ErrorCode::bad_parameter, "poisson mean must be a finite non-negative real");
  if (mean == 0.0) return 0;
  std::int64_t total = 0;
  double remaining = mean;
  while (remaining > 16.0) {
    total += detail::sample_poisson_knuth(rng, 16.0);
    remaining -= 16.0;
  }
  return total + detail::sample_poisson_knuth(rng, remaining);
}

// --- lifetime distributions -------------------------------------------------

struct ExpoRate {
  double rate;
};
struct MaxExp {
  std::int64_t n;
};
struct SumExpSeq {
  std::int64_t n;
  std::int64_t k;
};
struct StableHalf {};
struct PoissonCount {
  double mean;
};
struct Zero {};

/// The lifetime laws used by the election schemes. All variants except Zero
/// and PoissonCount are atom-free on [0, inf).
using LifetimeDistribution =
    std::variant<ExpoRate, MaxExp, SumExpSeq, StableHalf, PoissonCount, Zero>;

inline double sample(const LifetimeDistribution& dist, RngStream& rng) {
  return std::visit(
      [&rng](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ExpoRate>) {
          return sample_exponential(rng, d.rate);
        } else if constexpr (std::is_same_v<T, MaxExp>) {
          return sample_max_exp(rng, d.n);
        } else if constexpr (std::is_same_v<T, SumExpSeq>) {
          return sample_sum_exp_seq(rng, d.n, d.k);
        } else if constexpr (std::is_same_v<T, StableHalf>) {
          return sample_stable_half(rng);
        } else if constexpr (std::is_same_v<T, PoissonCount>) {
          return static_cast<double>(sample_poisson(rng, d.mean));
        } else {
          return 0.0;
        }
      },
      dist);
}

/// P(M_a < M_b) for independent maxima of a and b unit-rate exponentials:
/// b / (a + b). Both counts zero is an undefined comparison (two point
/// masses at 0).
inline double prob_max_exp_first(std::int64_t a, std::int64_t b) {
  if (a < 0 || b < 0)
    throw Error(ErrorCode::bad_parameter, "max-exp counts must be >= 0");
  if (a == 0 && b == 0)
    throw Error(ErrorCode::bad_parameter,
                "P(M_0 < M_0) is undefined: both sides are point masses at 0");
  return static_cast<double>(b) / static_cast<double>(a + b);
}

/// P(S_m < S'_n) for independent sums of m and n stable-1/2 draws:
/// (2/pi) * arctan(n/m). Uses the scaling S_k ~ k^2 X.
inline double prob_stable_sum_first(std::int64_t m, std::int64_t n) {
  if (m < 1 || n < 1)
    throw Error(ErrorCode::bad_parameter, "stable sum sizes must be >= 1");
  return kTwoOverPi * std::atan(static_cast<double>(n) / static_cast<double>(m));
}

}  // namespace electree
