#include "addmc/rng.hpp"

#include <cmath>

namespace addmc {

CounterRng::CounterRng(StreamKey key) {
  std::uint64_t h = mix(key.seed ^ 0x243f6a8885a308d3ULL);
  h = mix(h ^ (key.increment + 0x13198a2e03707344ULL));
  h = mix(h ^ (key.batch + 0xa4093822299f31d0ULL));
  counter_ = h;
}

double CounterRng::normal() {
  // Marsaglia polar method
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, q;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    q = u * u + v * v;
  } while (q >= 1.0);
  const double f = std::sqrt(-2.0 * std::log(q) / q);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

}  // namespace addmc
