#pragma once

#include <cstdint>
#include <string_view>

namespace copent {

// SplitMix64 (Steele, Lea & Flood 2014). The whole state is one 64-bit word,
// advanced by the golden-gamma increment 0x9E3779B97F4A7C15 and finalized by
// mix64 below. Every random quantity in the library is drawn from this
// generator so fixtures are reproducible in any language.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix64(state_);
  }

  // Uniform in [0, 1): top 53 bits scaled by 2^-53.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1): midpoint of the 2^-53 grid cell, never 0 or 1.
  double uniform_open() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  static constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// 64-bit FNV-1a over the bytes of s.
constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

// Standard normal quantile by Acklam's rational approximation
// (relative error below 1.15e-9 over (0, 1)).
double normal_quantile(double p);

}  // namespace copent
