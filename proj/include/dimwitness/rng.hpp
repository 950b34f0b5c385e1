#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace dimwitness {

// SplitMix64: a counter-based generator. The state is a counter advanced by a
// fixed odd increment and each output is a bijective mix of the counter, so a
// stream is fully determined by its key and position.
//
// Every sampler built on top of this is hand-written, which keeps seeded runs
// bit-identical across standard library implementations.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t key) : state_(mix(key)) {}

  // Stream for a sub-task, keyed as key ^ index.
  static SplitMix64 stream(std::uint64_t key, std::uint64_t index) {
    return SplitMix64(key ^ index);
  }

  std::uint64_t next() {
    state_ += kIncrement;
    return mix(state_);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1).
  double uniform_open() {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return u;
  }

  // Standard normal via Box-Muller (one variate per call; the second is
  // discarded so the stream position does not depend on call history).
  double normal() {
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kIncrement = 0x9e3779b97f4a7c15ULL;
  std::uint64_t state_;
};

}  // namespace dimwitness
