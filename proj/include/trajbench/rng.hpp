#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace trajbench {

// All randomness in this project flows through std::mt19937_64 plus the
// transforms below. The standard library's distributions and std::shuffle are
// implementation-defined, so byte-level reproducibility of seeded runs relies
// on these hand-rolled, fully specified alternatives instead.
using Rng = std::mt19937_64;

// Uniform double in [0, 1) built from the top 53 bits of one raw draw.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform double in [lo, hi).
inline double uniform_in(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

// Standard normal via Box-Muller. Consumes exactly two raw draws per call;
// u1 is shifted into (0, 1] so the logarithm is always finite.
inline double gaussian(Rng& rng) {
  const double u1 = static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
  const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

// Fisher-Yates permutation of {0, ..., n-1}. Index draws use rejection-free
// modulo reduction; the bias is negligible for the sizes used here and the
// sequence is fully determined by the seed.
inline std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(idx[i - 1], idx[j]);
  }
  return idx;
}

inline constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic sub-seed for an independent job (a fold, a model, ...).
inline constexpr std::uint64_t derive_seed(std::uint64_t base,
                                           std::string_view tag) {
  return splitmix64(base ^ fnv1a64(tag));
}

}  // namespace trajbench
