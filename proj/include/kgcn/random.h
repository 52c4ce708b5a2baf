/* Copyright 2026 The KGCN Recommender Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef KGCN_RANDOM_H_
#define KGCN_RANDOM_H_

#include <cstdint>
#include <random>

namespace kgcn {

using Rng = std::mt19937_64;

// Independent, reproducible sub-streams of one user-facing seed (splitmix64
// finalizer over seed and stream tag).
inline std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

enum class SeedStream : std::uint64_t {
  kNegatives = 1,
  kSplit = 2,
  kNeighbors = 3,
  kInit = 4,
  kShuffle = 5,
};

inline Rng MakeRng(std::uint64_t seed, SeedStream stream) {
  return Rng(DeriveSeed(seed, static_cast<std::uint64_t>(stream)));
}

}  // namespace kgcn

#endif  // KGCN_RANDOM_H_
