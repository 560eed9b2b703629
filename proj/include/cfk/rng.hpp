// Copyright 2026 The cfk Authors
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

#ifndef CFK_RNG_HPP_
#define CFK_RNG_HPP_

// Seed derivation and bounded draws. std::mt19937_64 is bit-specified by the
// standard, but the std distributions are not, so bounded integers are drawn
// here to keep results identical across standard libraries.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace cfk {

using Engine = std::mt19937_64;

// SplitMix64 finalizer. Used as a counter-based hash for seed streams.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL + 1));
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                    std::uint64_t b) {
  return derive_seed(derive_seed(seed, a), b);
}

// Maps a 64-bit hash onto [0, n) by multiply-high. Bias is below 2^-32 for
// every n this library uses.
inline std::size_t bounded(std::uint64_t hash, std::size_t n) {
  return static_cast<std::size_t>(
      (static_cast<unsigned __int128>(hash) * static_cast<std::uint64_t>(n)) >>
      64);
}

// Unbiased draw from [0, n) by rejection.
inline std::size_t uniform_index(Engine& engine, std::size_t n) {
  const std::uint64_t range = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
  std::uint64_t draw = engine();
  while (draw >= limit) draw = engine();
  return static_cast<std::size_t>(draw % range);
}

template <typename T>
void shuffle(std::vector<T>& items, Engine& engine) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[uniform_index(engine, i)]);
  }
}

}  // namespace cfk

#endif  // CFK_RNG_HPP_
