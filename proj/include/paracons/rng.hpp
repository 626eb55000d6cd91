#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

#include "paracons/digest.hpp"

namespace paracons {

// Deterministic random stream. std::mt19937_64 output is fixed by the
// standard; the distributions are not, so bounded and real draws are done
// here to keep results identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Stream keyed on a seed plus a sequence of strings, independent of the
  // order in which other streams are consumed.
  static Rng keyed(std::uint64_t seed, std::initializer_list<std::string_view> keys) {
    std::uint64_t h = mix64(seed);
    for (std::string_view k : keys) h = mix64(h ^ hash64(k, h));
    return Rng(h);
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform real in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace paracons
