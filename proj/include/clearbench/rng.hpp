#ifndef CLEARBENCH_RNG_HPP
#define CLEARBENCH_RNG_HPP

#include <cstdint>

namespace clearbench {

// SplitMix64 (Steele/Lea/Vigna reference constants). The whole generator is
// a dozen lines of integer arithmetic, so any consumer can regenerate a
// fixture bit-for-bit from the seed alone, in any language.
//
// Derived draws use only IEEE add/mul/compare (no libm), which keeps the
// sampled values identical across platforms too:
//   next_unit      (next() >> 11) * 2^-53, uniform on [0, 1)
//   next_gaussian  Irwin-Hall: sum of 12 uniforms minus 6, ~N(0, 1)
//   next_below     128-bit multiply-shift range reduction
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool next_bernoulli(double p) { return next_unit() < p; }

  double next_gaussian() {
    double s = 0.0;
    for (int i = 0; i < 12; ++i) s += next_unit();
    return s - 6.0;
  }

  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  // Independent substream for item `index` of a seeded run. Feeding the
  // mixed value through the same finalizer keeps substreams decorrelated.
  static Rng substream(std::uint64_t seed, std::uint64_t index) {
    Rng mixer(seed ^ (0xA0761D6478BD642Full * (index + 1)));
    return Rng(mixer.next());
  }

 private:
  std::uint64_t state_;
};

}  // namespace clearbench

#endif  // CLEARBENCH_RNG_HPP
