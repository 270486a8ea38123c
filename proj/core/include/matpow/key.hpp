#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace matpow {

/// Canonical serialization of a matrix (row-major) or vector over F_q: each
/// element is stored as its dense field index c0 + p*c1.
struct PackedKey {
  static constexpr std::size_t kCapacity = 9;

  std::array<std::uint64_t, kCapacity> words{};
  std::uint8_t len = 0;

  friend bool operator==(const PackedKey& a, const PackedKey& b) noexcept {
    if (a.len != b.len) return false;
    for (std::size_t i = 0; i < a.len; ++i) {
      if (a.words[i] != b.words[i]) return false;
    }
    return true;
  }
};

struct PackedKeyHash {
  std::size_t operator()(const PackedKey& k) const noexcept {
    // splitmix64 finalizer folded over the words
    std::uint64_t h = 0x9E3779B97F4A7C15ull ^ k.len;
    for (std::size_t i = 0; i < k.len; ++i) {
      std::uint64_t z = h + k.words[i] + 0x9E3779B97F4A7C15ull;
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
      h = z ^ (z >> 31);
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace matpow
