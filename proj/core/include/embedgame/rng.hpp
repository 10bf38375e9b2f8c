// Copyright 2026 The Embedgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EMBEDGAME_RNG_HPP_
#define EMBEDGAME_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <span>

namespace embedgame {

// Deterministic splitmix64 generator.
//
// Everything random in the library flows through this class rather than
// <random> distributions, because the standard distributions are
// implementation-defined and results must be bitwise identical for a given
// seed across toolchains and thread counts.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via the polar method.
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_double() - 1.0;
      v = 2.0 * next_double() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double r = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * r;
    have_spare_ = true;
    return u * r;
  }

  // Samples an index proportionally to `weights` (need not be normalized;
  // tiny negative entries from roundoff are treated as zero).
  std::size_t pick(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w > 0.0 ? w : 0.0;
    const double z = next_double() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      acc += weights[i] > 0.0 ? weights[i] : 0.0;
      if (z < acc) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
  }

  // Derives an independent stream for sub-task `index` (e.g. one Monte Carlo
  // trial), so that fan-out order and thread count cannot affect results.
  static Rng child(std::uint64_t master_seed, std::uint64_t index) {
    Rng mix(master_seed ^ (0x632be59bd9b4e019ULL * (index + 1)));
    return Rng(mix.next_u64());
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace embedgame

#endif  // EMBEDGAME_RNG_HPP_
