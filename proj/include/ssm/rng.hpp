#pragma once

#include <cstdint>

namespace ssm {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// splitmix64 stream. Streams are derived from (seed, index) so any item can be
// generated independently of scheduling order: parallel runs reproduce the
// sequential output bit for bit.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t s) : state(s) {}

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
};

inline SplitMix64 stream_for(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(mix64(seed ^ (0xD1B54A32D192ED03ull * (index + 1))));
}

inline double uniform01(std::uint64_t bits) { return double(bits >> 11) * 0x1.0p-53; }

}  // namespace ssm
