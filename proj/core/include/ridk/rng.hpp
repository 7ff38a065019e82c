#pragma once

#include <cstdint>
#include <random>

namespace ridk {

using Rng = std::mt19937_64;

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of replica `index` under `master`:  mix64(master ^ mix64(index)).
/// Streams of different replicas are decorrelated and independent of the
/// order in which replicas are scheduled.
constexpr std::uint64_t replica_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(master ^ mix64(index));
}

}  // namespace ridk
