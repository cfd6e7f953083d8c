#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace edgecl {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Used to derive independent child seeds from a run
// seed plus a stream of tags, so that adding a consumer never perturbs the
// draws of an existing one.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = mix_seed(seed);
  for (auto t : tags) h = mix_seed(h ^ mix_seed(t + 0x632be59bd9b4e019ULL));
  return h;
}

inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> tags = {}) {
  return Rng(derive_seed(seed, tags));
}

// Stable tags for the derive_seed streams used across the library.
namespace seed_tag {
inline constexpr std::uint64_t kScene = 1;
inline constexpr std::uint64_t kStream = 2;
inline constexpr std::uint64_t kModelInit = 3;
inline constexpr std::uint64_t kShuffle = 4;
inline constexpr std::uint64_t kHoldout = 5;
inline constexpr std::uint64_t kProbe = 6;
inline constexpr std::uint64_t kOracle = 7;
inline constexpr std::uint64_t kUniformSample = 8;
inline constexpr std::uint64_t kWarmup = 9;
inline constexpr std::uint64_t kFamily = 10;
inline constexpr std::uint64_t kRampup = 11;
}  // namespace seed_tag

}  // namespace edgecl
