// Copyright 2026 The fidelimax authors
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

#ifndef FIDELIMAX_RNG_HPP
#define FIDELIMAX_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "fidelimax/errors.hpp"

namespace fidelimax {

/// Deterministic 64-bit generator used for every random choice in the
/// library. This is SplitMix64 (Steele, Lea & Flood, 2014): a Weyl counter
/// advanced by the golden-ratio increment, pushed through a fixed 64-bit
/// finalizer. Counter-based, so a (seed, counter) pair fully determines the
/// output stream on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  /// Uniform double in [0, 1), 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in (0, 1]; safe as a log() argument.
  double next_double_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller.
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_double_open();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  /// Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) {
    if (n == 0) throw invalid_input_error("next_below: n must be positive");
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = n * ((~0ull) / n);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  /// One draw from a categorical distribution given by `probs` (assumed to
  /// sum to ~1). Inverse-CDF; ties break toward the lower index.
  std::size_t next_categorical(const std::vector<double>& probs) {
    if (probs.empty()) {
      throw invalid_input_error("next_categorical: empty distribution");
    }
    const double u = next_double();
    double cum = 0.0;
    for (std::size_t k = 0; k + 1 < probs.size(); ++k) {
      cum += probs[k];
      if (u < cum) return k;
    }
    return probs.size() - 1;
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Seed for an independent substream (trial number, bootstrap replicate,
/// parallel task, ...). Substreams of a master seed never share state, so
/// results are independent of execution order.
inline std::uint64_t substream(std::uint64_t master, std::uint64_t index) {
  return SplitMix64::mix(master ^ SplitMix64::mix(index + 0x632be59bd9b4e019ull));
}

}  // namespace fidelimax

#endif  // FIDELIMAX_RNG_HPP
