// Copyright 2026 The oul Authors. All rights reserved.
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

#ifndef OUL_RNG_H_
#define OUL_RNG_H_

#include <cstdint>
#include <random>

namespace oul {

// Named sub-streams derived from one master seed. Every consumer of
// randomness draws from its own stream so that, e.g., adversary labels are
// independent of anything a learner does.
enum class Stream : std::uint64_t {
  kProcess = 1,
  kLabels = 2,
  kTarget = 3,
  kLearner = 4,
  kRollout = 5,
  kNoise = 6,
  kWalk = 7,
};

// splitmix64 finalizer.
inline std::uint64_t Mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Split function: seed for sub-stream `stream`, counter `index` of `master`.
inline std::uint64_t SplitSeed(std::uint64_t master, Stream stream,
                               std::uint64_t index = 0) {
  return Mix64(Mix64(master ^ Mix64(static_cast<std::uint64_t>(stream))) +
               index);
}

using Rng = std::mt19937_64;

inline Rng MakeRng(std::uint64_t master, Stream stream,
                   std::uint64_t index = 0) {
  return Rng(SplitSeed(master, stream, index));
}

// Uniform integer in [0, n) by rejection; independent of the standard
// library's distribution implementations so traces are portable.
inline std::uint64_t UniformIndex(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = Rng::max() - Rng::max() % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

inline double Uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline int FairBit(Rng& rng) { return static_cast<int>(rng() >> 63); }

}  // namespace oul

#endif  // OUL_RNG_H_
