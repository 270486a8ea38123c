#include "matpow/prng.hpp"

namespace matpow {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t Xorshift64Star::uniform(std::uint64_t n) noexcept {
  const std::uint64_t limit = ~0ull - (~0ull % n);
  std::uint64_t x = next();
  while (x >= limit) x = next();
  return x % n;
}

Xorshift64Star instance_rng(std::uint64_t seed, std::uint64_t index) noexcept {
  std::uint64_t s = seed ^ index;
  return Xorshift64Star(splitmix64(s));
}

}  // namespace matpow
