// Copyright 2026 The MARL Lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MARL_RNG_H_
#define MARL_RNG_H_

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace marl {

// Random streams.
//
// Every experiment has one root seed. Child streams are derived with
// SplitMix64 so that a (seed, run, player) triple always maps to the same
// mt19937_64 state on every platform:
//
//   child_seed = mix(mix(root ^ mix(run + 1)) ^ mix(stream + 0x9e37...))
//
// The variates below are computed from raw 64-bit draws rather than the
// <random> distributions, whose output is implementation-defined.
inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t DeriveSeed(std::uint64_t root, std::uint64_t run,
                                std::uint64_t stream) {
  const std::uint64_t r = SplitMix64(root ^ SplitMix64(run + 1));
  return SplitMix64(r ^ SplitMix64(stream + 0x9e3779b97f4a7c15ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t root, std::uint64_t run, std::uint64_t stream)
      : engine_(DeriveSeed(root, run, stream)) {}

  // Uniform in [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Index drawn from a discrete distribution (probabilities summing to ~1).
  int Categorical(std::span<const double> probs) {
    const double u = Uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
  }

  // Exponential with the given rate (mean 1 / rate).
  double Exponential(double rate) { return -std::log1p(-Uniform()) / rate; }

  // Poisson by inversion; intended for small means.
  int Poisson(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    int k = 0;
    double prod = Uniform();
    while (prod > limit) {
      ++k;
      prod *= Uniform();
    }
    return k;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace marl

#endif  // MARL_RNG_H_
