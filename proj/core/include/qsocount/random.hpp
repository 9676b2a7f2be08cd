#pragma once

#include <cstdint>
#include <random>

namespace qsocount {

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

// SplitMix64 step; used to derive independent child seeds from one seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Seed of child stream `index` of `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed ^ splitmix64(index);
  return splitmix64(state);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, bound) by rejection; bound >= 1.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (true) {
      std::uint64_t r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

  Rng split() { return Rng(next()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qsocount
