#pragma once

#include <cstdint>

namespace chordsdp {

/// SplitMix64: the state advances by 0x9E3779B97F4A7C15 per draw and the
/// output is the standard finalizer of the new state. Small, fast and fully
/// specified, so a seed pins down every generated instance.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on the open interval (0, 1): ((u >> 11) + 0.5) * 2^-53.
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace chordsdp
