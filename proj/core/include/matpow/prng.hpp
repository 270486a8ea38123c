#pragma once

// Portable reproducible randomness: xorshift64* seeded through splitmix64.
//
//   splitmix64:  z = (s += 0x9E3779B97F4A7C15); z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
//                z = (z ^ (z >> 27)) * 0x94D049BB133111EB; return z ^ (z >> 31)
//   xorshift64*: x ^= x >> 12; x ^= x << 25; x ^= x >> 27; return x * 0x2545F4914F6CDD1D
//
// The generator for instance i of a run with seed s starts from
// splitmix64 applied once to the state (s ^ i); a zero result is replaced by
// 0x9E3779B97F4A7C15. uniform(n) rejects draws >= the largest multiple of n.

#include <cstdint>

namespace matpow {

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

class Xorshift64Star {
 public:
  explicit Xorshift64Star(std::uint64_t seed) noexcept : state_(seed == 0 ? 0x9E3779B97F4A7C15ull : seed) {}

  std::uint64_t next() noexcept {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1Dull;
  }

  /// Uniform in [0, n); n must be positive.
  std::uint64_t uniform(std::uint64_t n) noexcept;
  /// Uniform double in [0, 1) from the top 53 bits.
  double unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

Xorshift64Star instance_rng(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace matpow
