#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace fruiter {

// SplitMix64 (Steele, Lea & Vigna). Chosen because the algorithm is fully
// specified by three multiply-xorshift steps and has published reference
// outputs, so mapper runs reproduce bit-for-bit on any platform. Reference
// outputs for state 0 start: 0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, ...
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform draw from the half-open interval [0, 1), 53-bit resolution.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform draw from {0, ..., bound-1} via Lemire's multiply-shift
  // reduction. bound must be nonzero.
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  // Fisher-Yates, iterating i from n-1 down to 1 with j = next_below(i+1).
  // Spelled out so the draw sequence is part of the contract.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

private:
  std::uint64_t state_;
};

// FNV-1a 64-bit over a byte string. Used to derive per-transfer seeds and
// config hashes deterministically.
inline std::uint64_t fnv1a64(const void* data, std::size_t len,
                             std::uint64_t seed = 0xCBF29CE484222325ULL) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline std::uint64_t fnv1a64(const std::string& s,
                             std::uint64_t seed = 0xCBF29CE484222325ULL) {
  return fnv1a64(s.data(), s.size(), seed);
}

}  // namespace fruiter
