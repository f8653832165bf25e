#pragma once

#include <cstdint>
#include <random>

namespace pacmap {

/// Seeded generator with a draw counter. mt19937_64's output sequence is fixed
/// by the standard; the conversions below avoid the implementation-defined
/// standard distributions so replays match across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() {
    ++draws_;
    return engine_();
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

  std::uint64_t draws() const { return draws_; }

  friend bool operator==(const Rng&, const Rng&) = default;

 private:
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
};

}  // namespace pacmap
