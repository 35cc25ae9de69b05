#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace twobody {

/// SplitMix64 with an explicit uniform mapping.  Standard-library
/// distributions are implementation-defined, which would break the
/// byte-identical-report requirement across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (s_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// uniform in [0, 1)
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  std::array<double, 6> uniform6(double a, double b) {
    std::array<double, 6> p;
    for (auto& x : p) x = uniform(a, b);
    return p;
  }

 private:
  std::uint64_t s_;
};

constexpr std::uint64_t kDefaultSeed = 0x5EED;

}  // namespace twobody
