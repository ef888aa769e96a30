#pragma once

#include <cstdint>

namespace addmc {

/// Identifies one independent random stream: every (seed, increment, batch)
/// triple maps to its own counter-based sequence, so results do not depend
/// on how batches are spread across threads.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t increment = 0;
  std::uint64_t batch = 0;
};

/// SplitMix64: a counter advanced by a Weyl constant, whitened by a bijective mixer.
class CounterRng {
 public:
  explicit CounterRng(StreamKey key);

  std::uint64_t next() {
    counter_ += 0x9e3779b97f4a7c15ULL;
    return mix(counter_);
  }
  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }
  double normal();

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // UniformRandomBitGenerator surface for <random> distributions.
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return next(); }

 private:
  std::uint64_t counter_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace addmc
