#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace agglab {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of the stream for one ensemble member. Distinct run indices give
/// distinct, decorrelated seeds: splitmix64(splitmix64(seed) ^ splitmix64(~run)).
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t run_index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(~run_index));
}

inline Engine make_stream(std::uint64_t seed, std::uint64_t run_index) {
  return Engine(stream_seed(seed, run_index));
}

/// Recorded in output metadata.
std::string generator_description();

}  // namespace agglab
