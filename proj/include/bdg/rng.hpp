#pragma once
// Pinned PRNG for everything seed-dependent. Synthetic fixtures depend on
// bit-stable streams, so the generator is fixed here rather than delegated
// to the standard library's unspecified distributions.

#include <cstdint>

namespace bdg {

// splitmix64 step; also used to mix seed components.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
  return splitmix64(s);
}

// xorshift64* (shifts 12/25/27, multiplier 2685821657736338717). The zero
// state is remapped through splitmix64 so every seed is valid.
class XorShift64Star {
 public:
  explicit XorShift64Star(std::uint64_t seed) {
    state_ = seed;
    if (state_ == 0) {
      std::uint64_t s = 0x9E3779B97F4A7C15ULL;
      state_ = splitmix64(s);
    }
  }

  std::uint64_t next() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 2685821657736338717ULL;
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Standard normal via the Marsaglia polar method (no trig, so the stream
  // depends only on sqrt/log). Generates pairs; the spare is cached.
  double next_gaussian();

 private:
  std::uint64_t state_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace bdg
