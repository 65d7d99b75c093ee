#pragma once

#include <cstdint>
#include <random>

namespace uplink {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent substream for (seed, stream, attempt). Streams are derived by
// hashing the counters, so any realization can be produced without replaying
// the ones before it.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream,
                       std::uint64_t attempt = 0) {
  const std::uint64_t a = mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL));
  const std::uint64_t b = mix64(a ^ mix64(attempt + 0x8cb92ba72f3d8dd7ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return Rng(seq);
}

}  // namespace uplink
