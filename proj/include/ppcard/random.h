// Copyright 2026 The ppcard Authors
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

#ifndef PPCARD_RANDOM_H_
#define PPCARD_RANDOM_H_

#include <cstdint>
#include <random>

namespace ppcard {

// All randomness in the library flows through Rng so that results depend only
// on seeds and never on the standard library's distribution implementations.
using Rng = std::mt19937_64;

// SplitMix64 finalizer. Used to derive independent substream seeds.
constexpr uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for substream `index` of `seed`. Distinct indices give unrelated
// streams; the mapping is stable across platforms and builds.
constexpr uint64_t DeriveSeed(uint64_t seed, uint64_t index) {
  return Mix64(Mix64(seed) ^ Mix64(index + 0x632be59bd9b4e019ULL));
}

// Uniform double in [0, 1) with 53 random bits.
inline double UniformDouble(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool Bernoulli(Rng& rng, double p) { return UniformDouble(rng) < p; }

// Uniform integer in [0, n). Lemire's multiply-shift with rejection.
inline uint64_t UniformIndex(Rng& rng, uint64_t n) {
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * n;
  auto low = static_cast<uint64_t>(m);
  if (low < n) {
    const uint64_t threshold = -n % n;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(rng()) * n;
      low = static_cast<uint64_t>(m);
    }
  }
  return static_cast<uint64_t>(m >> 64);
}

// Fisher-Yates shuffle driven by UniformIndex.
template <typename Container>
void Shuffle(Container& items, Rng& rng) {
  for (size_t i = items.size(); i > 1; --i) {
    const size_t j = UniformIndex(rng, i);
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace ppcard

#endif  // PPCARD_RANDOM_H_
