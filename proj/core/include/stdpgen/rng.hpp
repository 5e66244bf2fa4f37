#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace stdpgen {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to decorrelate derived stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for an independent stream identified by (seed, tags...).
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) noexcept {
  std::uint64_t h = mix64(seed);
  for (auto t : tags) h = mix64(h ^ mix64(t + 0x632be59bd9b4e019ULL));
  return h;
}

inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> tags = {}) {
  return Rng(derive_seed(seed, tags));
}

// Stream tags. Values are part of the reproducibility contract.
namespace stream {
inline constexpr std::uint64_t kWeightInit = 1;
inline constexpr std::uint64_t kPlasticityNoise = 2;
inline constexpr std::uint64_t kIncrementReservoir = 3;
inline constexpr std::uint64_t kEncoding = 4;
inline constexpr std::uint64_t kShuffle = 5;
inline constexpr std::uint64_t kEvaluation = 6;
inline constexpr std::uint64_t kBayesOpt = 7;
inline constexpr std::uint64_t kFold = 8;
inline constexpr std::uint64_t kCalibration = 9;
inline constexpr std::uint64_t kSweepCell = 10;
}  // namespace stream

}  // namespace stdpgen
