#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace alstl {

using Rng = std::mt19937_64;

/// Independent stream derived from a run seed and a stream name
/// ("demo-gen", "training", "slip", ...), so components can be re-seeded
/// separately.
inline Rng make_stream(std::uint64_t seed, std::string_view name) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return Rng(seq);
}

/// Uniform draw in [0, 1) with a fixed recipe, independent of the standard
/// library's distribution implementations.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, n).
inline int uniform_index(Rng& rng, int n) { return static_cast<int>(uniform01(rng) * n); }

}  // namespace alstl
