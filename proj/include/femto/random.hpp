#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace femto {

using Rng = std::mt19937_64;

/// Engine for an independent stream identified by (seed, stream ids...).
/// Identical inputs always yield an identical sequence, regardless of which
/// thread constructs the engine.
inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream = {}) {
  std::vector<std::uint32_t> words;
  words.reserve(2 + 2 * stream.size());
  auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  for (auto s : stream) push(s);
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

/// Mixes a base seed with an index into an independent 64-bit seed (splitmix64).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stream tags keep the role of each random sequence apart.
namespace stream {
inline constexpr std::uint64_t kDeployment = 0x6465706c6f79ULL;
inline constexpr std::uint64_t kFading = 0x666164696e67ULL;
inline constexpr std::uint64_t kColoring = 0x636f6c6f72ULL;
inline constexpr std::uint64_t kUePlacement = 0x7565ULL;
}  // namespace stream

}  // namespace femto
