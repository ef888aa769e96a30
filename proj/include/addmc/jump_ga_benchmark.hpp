#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "addmc/additive_models.hpp"
#include "addmc/rng.hpp"

namespace addmc {

enum class JumpSign { positive, negative };

/// Jumps of f_t - f_s larger than epsilon on one side, as a density in z = |x| >= epsilon.
struct JumpDensity {
  AtsParams params;
  JumpSign sign = JumpSign::positive;
  double s = 0.0;
  double t = 0.0;
  double epsilon = 0.0;
  double intensity = 0.0;  // lambda = int_epsilon^inf (nu_t - nu_s)

  /// nu_t(+-z) - nu_s(+-z).
  double unnormalized(double z) const;
  /// m(z) = unnormalized(z) / intensity on z >= epsilon.
  double operator()(double z) const { return unnormalized(z) / intensity; }
};

/// int_epsilon^inf (nu_t(+-z) - nu_s(+-z)) dz by adaptive quadrature.
double jump_intensity(const AtsParams& p, double s, double t, double epsilon, JumpSign sign);

JumpDensity make_jump_density(const AtsParams& p, double s, double t, double epsilon, JumpSign sign);

struct ZigguratStats {
  std::size_t draws = 0;
  std::size_t fast_accepts = 0;  // inside a rectangle, no density evaluation
  std::size_t tail_draws = 0;    // resolved by the tail fallback

  /// Fraction of draws resolved without the tail fallback.
  double acceptance_rate() const {
    return draws ? 1.0 - static_cast<double>(tail_draws) / static_cast<double>(draws) : 0.0;
  }
};

/// Equal-area Ziggurat for a non-increasing, bounded density on [origin, inf).
/// Layer 0 is the base strip: the rectangle under f(r) plus the tail beyond r.
class ZigguratTable {
 public:
  ZigguratTable(std::function<double(double)> density, double origin, int n_ret);

  int layers() const { return n_; }
  double area() const { return area_; }
  /// Abscissae of the layer edges measured from the origin; edges()[n] = 0.
  const std::vector<double>& edges() const { return x_; }
  /// Area of layer i (base strip included for i = 0).
  double layer_area(int i) const;

  double sample(CounterRng& rng, ZigguratStats* stats = nullptr) const;

 private:
  double f(double y) const { return density_(origin_ + y); }
  double inverse(double level, double y_hi) const;
  double tail_mass(double r) const;
  void build_tail_table();
  double sample_tail(CounterRng& rng) const;

  std::function<double(double)> density_;
  double origin_;
  int n_;
  double area_ = 0.0;
  std::vector<double> x_;   // x_[0] = area / f(r), x_[1] = r, ..., x_[n] = 0
  std::vector<double> fx_;  // f at x_[i]; fx_[0] = 0
  std::vector<double> tail_y_;
  std::vector<double> tail_cdf_;
};

ZigguratTable build_ziggurat(const JumpDensity& d, int n_ret = 256);

/// Moments of the jumps of size below epsilon, which the benchmark replaces by a Gaussian.
struct SmallJumpMoments {
  double compensator = 0.0;  // int_{|x|<eps} (e^x - 1 - x) (nu_t - nu_s)
  double variance = 0.0;     // int_{|x|<eps} x^2 (nu_t - nu_s)
};

SmallJumpMoments small_jump_moments(const AtsParams& p, double s, double t, double epsilon);

inline constexpr int kDefaultZigguratLayers = 256;

/// Increment sampler: Poisson counts of large jumps drawn by Ziggurat, a
/// Gaussian for the small jumps, and a drift fixing E[e^X] = 1 exactly.
class GaIncrementSampler {
 public:
  GaIncrementSampler(const AtsParams& p, double s, double t, double epsilon, int n_ret = kDefaultZigguratLayers);

  double intensity(JumpSign sign) const { return sign == JumpSign::positive ? lambda_pos_ : lambda_neg_; }
  double variance() const { return variance_; }
  double drift() const { return drift_; }

  double draw(CounterRng& rng, ZigguratStats* stats = nullptr) const;

  /// Batch b of the output uses StreamKey{seed, increment, b}.
  std::vector<double> sample(std::size_t n_sim, std::uint64_t seed, std::uint64_t increment = 0,
                             unsigned threads = 0) const;

 private:
  double lambda_pos_;
  double lambda_neg_;
  double variance_;
  double drift_;
  ZigguratTable positive_;
  ZigguratTable negative_;
};

std::vector<double> ga_increment_sampler(const AtsParams& p, double s, double t, double epsilon, std::size_t n_sim,
                                         std::uint64_t seed, int n_ret = kDefaultZigguratLayers,
                                         unsigned threads = 0);

}  // namespace addmc
