#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

namespace tclab {

// SplitMix64 output function. Applied to key + k * golden it forms a
// counter-based generator: the k-th draw is a pure function of (key, k).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Derives an independent seed for a numbered sub-job (report cell, dt level...).
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
  return mix64(mix64(master_seed + kGolden) ^ mix64((index + 1) * kGolden));
}

// Identifies one replicate's stream of standard normals. The normal with index
// `counter + i` depends only on (master_seed, replicate, counter + i).
struct RngStream {
  std::uint64_t master_seed = 0;
  std::uint64_t replicate = 0;
  std::uint64_t counter = 0;

  std::uint64_t key() const noexcept {
    return mix64(mix64(master_seed ^ 0x6a09e667f3bcc909ULL) + mix64(replicate * kGolden + 1));
  }

  // Uniform on (0, 1], 53 bits.
  static double uniform_from_bits(std::uint64_t bits) noexcept {
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
  }

  // Normal number `index` of this stream (Box-Muller over draw pairs).
  double normal_at(std::uint64_t index) const noexcept {
    const std::uint64_t k = key();
    const std::uint64_t pair = index >> 1;
    const double u1 = uniform_from_bits(mix64(k + (2 * pair + 1) * kGolden));
    const double u2 = uniform_from_bits(mix64(k + (2 * pair + 2) * kGolden));
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return (index & 1U) ? r * std::sin(angle) : r * std::cos(angle);
  }

  // Fills `out` with normals counter, counter+1, ... and advances the counter.
  void fill_normals(std::span<double> out) noexcept {
    const std::uint64_t k = key();
    std::size_t i = 0;
    if ((counter & 1U) && !out.empty()) {
      out[i++] = normal_at(counter);
      ++counter;
    }
    for (; i + 1 < out.size(); i += 2) {
      const std::uint64_t pair = counter >> 1;
      const double u1 = uniform_from_bits(mix64(k + (2 * pair + 1) * kGolden));
      const double u2 = uniform_from_bits(mix64(k + (2 * pair + 2) * kGolden));
      const double r = std::sqrt(-2.0 * std::log(u1));
      const double angle = 2.0 * std::numbers::pi * u2;
      out[i] = r * std::cos(angle);
      out[i + 1] = r * std::sin(angle);
      counter += 2;
    }
    if (i < out.size()) {
      out[i] = normal_at(counter);
      ++counter;
    }
  }

  // Stream for another replicate under the same master seed, counter reset.
  RngStream for_replicate(std::uint64_t r) const noexcept { return {master_seed, r, 0}; }
};

}  // namespace tclab
