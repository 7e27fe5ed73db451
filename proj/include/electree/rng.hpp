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

#include <bit>
#include <cstdint>

#include "electree/error.hpp"

namespace electree {

namespace detail {

// Stafford variant 13 of the 64-bit finalizer. Bijective.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Per-stream additive constant. Must be odd; the popcount guard rejects
// constants with too-regular bit transitions (same safeguard as
// SplittableRandom's mixGamma).
constexpr std::uint64_t mix_gamma(std::uint64_t z) noexcept {
  z = mix64(z) | 1ULL;
  if (std::popcount(z ^ (z >> 1)) < 24) z ^= 0xaaaaaaaaaaaaaaaaULL;
  return z;
}

}  // namespace detail

/// Counter-based splittable random stream in the SplitMix64 family.
///
/// A stream is fully determined by (seed, stream_id): the state advances by a
/// per-stream odd constant and each output is a finalizer of the state, so
/// identical parameters replay identical draw sequences and distinct
/// stream_ids give statistically independent sequences. Sub-stream
/// derivation: stream_id is mixed through a bijective finalizer and combined
/// with the seed to select (initial state, increment).
class RngStream {
 public:
  RngStream() noexcept : RngStream(0, 0) {}

  RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
      : seed_(seed), stream_id_(stream_id) {
    const std::uint64_t h = detail::mix64(stream_id ^ 0x6a09e667f3bcc909ULL);
    state_ = detail::mix64(seed ^ h);
    gamma_ = detail::mix_gamma(seed + h);
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() noexcept { return detail::mix64(state_ += gamma_); }

  /// Uniform on [0, 1), 53-bit resolution.
  double next_double() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1]; safe to pass to log().
  double next_double_open() noexcept {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound). Unbiased (rejection sampling).
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) throw Error(ErrorCode::bad_parameter, "next_below requires bound > 0");
    if (bound == 1) return 0;
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t x = next_u64();
      if (x >= threshold) return x % bound;
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t state_;
  std::uint64_t gamma_;
};

}  // namespace electree
