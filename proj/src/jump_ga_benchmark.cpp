#include "addmc/jump_ga_benchmark.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <random>

#include "addmc/errors.hpp"
#include "addmc/parallel.hpp"
#include "addmc/quadrature.hpp"

namespace addmc {

namespace {

constexpr double kJumpRelTol = 1e-12;
constexpr int kTailNodes = 1024;
// Below this size a jump contributes nothing representable to any moment,
// and |x|^{-1/2-alpha} K(|x| g) itself overflows not far beneath it.
constexpr double kNegligibleJump = 1e-100;

double signed_value(JumpSign sign, double z) { return sign == JumpSign::positive ? z : -z; }

double increment_measure(const AtsParams& p, double s, double t, double x) {
  const double upper = jump_measure_density(p, x, t);
  return s > 0.0 ? upper - jump_measure_density(p, x, s) : upper;
}

void require_jump_args(double s, double t, double epsilon) {
  if (!(s >= 0.0) || !(t > s)) throw DomainError("jump measure increment requires 0 <= s < t");
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
}

}  // namespace

double JumpDensity::unnormalized(double z) const {
  if (z < epsilon) return 0.0;
  return increment_measure(params, s, t, signed_value(sign, z));
}

double jump_intensity(const AtsParams& p, double s, double t, double epsilon, JumpSign sign) {
  require_jump_args(s, t, epsilon);
  auto f = [&](double z) { return increment_measure(p, s, t, signed_value(sign, z)); };
  return integrate_to_infinity(f, epsilon, kJumpRelTol).value;
}

JumpDensity make_jump_density(const AtsParams& p, double s, double t, double epsilon, JumpSign sign) {
  JumpDensity d;
  d.params = p;
  d.sign = sign;
  d.s = s;
  d.t = t;
  d.epsilon = epsilon;
  d.intensity = jump_intensity(p, s, t, epsilon, sign);
  if (!(d.intensity > 0.0)) throw NumericalError("jump density: zero intensity beyond epsilon");
  return d;
}

ZigguratTable::ZigguratTable(std::function<double(double)> density, double origin, int n_ret)
    : density_(std::move(density)), origin_(origin), n_(n_ret) {
  if (n_ret < 2) throw ConfigError("ziggurat needs at least 2 layers");
  const double f0 = f(0.0);
  if (!(f0 > 0.0) || !std::isfinite(f0)) throw ConfigError("ziggurat density must be positive and bounded");

  // Stack layers of area V(r) = r f(r) + tail(r) upwards from r; the top of
  // layer n - 1 overshoots f(0) when r is too small.
  std::vector<double> xs(n_ + 1), fs(n_ + 1);
  auto stack = [&](double r) {
    const double v = r * f(r) + tail_mass(r);
    xs[1] = r;
    fs[1] = f(r);
    for (int i = 1; i < n_ - 1; ++i) {
      const double level = fs[i] + v / xs[i];
      if (level >= f0) return 1.0;
      fs[i + 1] = level;
      xs[i + 1] = inverse(level, xs[i]);
    }
    return (fs[n_ - 1] + v / xs[n_ - 1] - f0) / f0;
  };

  double hi = 1.0;
  for (int k = 0; stack(hi) > 0.0; ++k) {
    if (k > 200) throw NumericalError("ziggurat: no base abscissa found");
    hi *= 2.0;
  }
  double lo = hi;
  for (int k = 0; stack(lo) <= 0.0; ++k) {
    if (k > 2000) throw NumericalError("ziggurat: no base abscissa found");
    lo *= 0.5;
  }
  for (int k = 0; k < 200 && hi - lo > 1e-15 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    (stack(mid) > 0.0 ? lo : hi) = mid;
  }
  stack(hi);
  const double r = hi;
  const double tail = tail_mass(r);
  area_ = r * fs[1] + tail;
  x_ = xs;
  fx_ = fs;
  x_[0] = area_ / fs[1];
  fx_[0] = 0.0;
  x_[n_] = 0.0;
  fx_[n_] = f0;
  build_tail_table();
}

double ZigguratTable::layer_area(int i) const {
  if (i == 0) return x_[1] * fx_[1] + tail_cdf_.back();
  return x_[i] * (fx_[i + 1] - fx_[i]);
}

double ZigguratTable::inverse(double level, double y_hi) const {
  auto g = [&](double y) { return f(y) - level; };
  if (g(y_hi) >= 0.0) return y_hi;
  boost::uintmax_t iterations = 200;
  const auto bracket =
      boost::math::tools::toms748_solve(g, 0.0, y_hi, boost::math::tools::eps_tolerance<double>(52), iterations);
  return 0.5 * (bracket.first + bracket.second);
}

double ZigguratTable::tail_mass(double r) const {
  return integrate_to_infinity(density_, origin_ + r, kJumpRelTol).value;
}

void ZigguratTable::build_tail_table() {
  const double r = x_[1];
  const double fr = fx_[1];
  double end = r;
  double step = std::max(r, 1e-3);
  while (f(end) > 1e-18 * fr) {
    end += step;
    step *= 2.0;
  }
  tail_y_.resize(kTailNodes + 1);
  tail_cdf_.assign(kTailNodes + 1, 0.0);
  for (int j = 0; j <= kTailNodes; ++j) tail_y_[j] = r + (end - r) * j / kTailNodes;
  for (int j = 0; j < kTailNodes; ++j) {
    const double a = origin_ + tail_y_[j];
    const double b = origin_ + tail_y_[j + 1];
    const double piece = integrate(density_, a, b, 1e-14 * (1.0 + fr * (b - a))).value;
    tail_cdf_[j + 1] = tail_cdf_[j] + piece;
  }
}

double ZigguratTable::sample_tail(CounterRng& rng) const {
  const double w = rng.uniform() * tail_cdf_.back();
  const auto it = std::upper_bound(tail_cdf_.begin(), tail_cdf_.end(), w);
  const std::size_t j = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - tail_cdf_.begin(), 1) - 1,
                                              tail_cdf_.size() - 2);
  const double mass = tail_cdf_[j + 1] - tail_cdf_[j];
  const double width = tail_y_[j + 1] - tail_y_[j];
  if (!(mass > 0.0)) return tail_y_[j];
  const double q = std::clamp((w - tail_cdf_[j]) / mass, 0.0, 1.0);
  // exponential interpolation of the density inside the segment
  const double fa = f(tail_y_[j]);
  const double fb = f(tail_y_[j + 1]);
  if (!(fa > 0.0 && fb > 0.0) || fa == fb) return tail_y_[j] + q * width;
  const double kappa = std::log(fa / fb) / width;
  return tail_y_[j] - std::log1p(-q * -std::expm1(-kappa * width)) / kappa;
}

double ZigguratTable::sample(CounterRng& rng, ZigguratStats* stats) const {
  if (stats) ++stats->draws;
  for (;;) {
    const auto i = std::min(static_cast<int>(rng.uniform() * n_), n_ - 1);
    const double y = rng.uniform() * x_[i];
    if (y < x_[i + 1]) {
      if (stats) ++stats->fast_accepts;
      return origin_ + y;
    }
    if (i == 0) {
      if (stats) ++stats->tail_draws;
      return origin_ + sample_tail(rng);
    }
    const double v = fx_[i] + rng.uniform() * (fx_[i + 1] - fx_[i]);
    if (v < f(y)) return origin_ + y;
  }
}

ZigguratTable build_ziggurat(const JumpDensity& d, int n_ret) {
  return ZigguratTable([d](double z) { return d.unnormalized(z); }, d.epsilon, n_ret);
}

SmallJumpMoments small_jump_moments(const AtsParams& p, double s, double t, double epsilon) {
  require_jump_args(s, t, epsilon);
  // z = epsilon e^{-y} maps (0, epsilon) onto (0, inf) with dz = z dy
  auto over_small = [&](auto weight) {
    auto f = [&, weight](double y) {
      const double z = epsilon * std::exp(-y);
      if (z < kNegligibleJump) return 0.0;
      return z * (weight(z) * increment_measure(p, s, t, z) + weight(-z) * increment_measure(p, s, t, -z));
    };
    return integrate_to_infinity(f, 0.0, kJumpRelTol).value;
  };
  SmallJumpMoments m;
  m.variance = over_small([](double x) { return x * x; });
  m.compensator = over_small([](double x) {
    // e^x - 1 - x cancels catastrophically for small x
    if (std::fabs(x) < 1e-2) return x * x * (0.5 + x * (1.0 / 6 + x * (1.0 / 24 + x * (1.0 / 120 + x / 720))));
    return std::expm1(x) - x;
  });
  return m;
}

GaIncrementSampler::GaIncrementSampler(const AtsParams& p, double s, double t, double epsilon, int n_ret)
    : lambda_pos_(jump_intensity(p, s, t, epsilon, JumpSign::positive)),
      lambda_neg_(jump_intensity(p, s, t, epsilon, JumpSign::negative)),
      variance_(small_jump_moments(p, s, t, epsilon).variance),
      drift_(0.0),
      positive_(build_ziggurat(make_jump_density(p, s, t, epsilon, JumpSign::positive), n_ret)),
      negative_(build_ziggurat(make_jump_density(p, s, t, epsilon, JumpSign::negative), n_ret)) {
  // E[e^X] = e^{drift + var/2 + int_{|x|>eps} (e^x - 1) nu}; pick the drift that makes it 1
  auto large = [&](JumpSign sign) {
    auto f = [&](double z) {
      const double x = signed_value(sign, z);
      const double nu = increment_measure(p, s, t, x);
      return nu == 0.0 ? 0.0 : std::expm1(x) * nu;
    };
    return integrate_to_infinity(f, epsilon, kJumpRelTol).value;
  };
  drift_ = -0.5 * variance_ - large(JumpSign::positive) - large(JumpSign::negative);
}

namespace {

double draw_with(const GaIncrementSampler& g, const ZigguratTable& pos, const ZigguratTable& neg,
                 std::poisson_distribution<long>& n_pos, std::poisson_distribution<long>& n_neg, CounterRng& rng,
                 ZigguratStats* stats) {
  double x = g.drift() + std::sqrt(g.variance()) * rng.normal();
  for (long k = n_pos(rng); k > 0; --k) x += pos.sample(rng, stats);
  for (long k = n_neg(rng); k > 0; --k) x -= neg.sample(rng, stats);
  return x;
}

}  // namespace

double GaIncrementSampler::draw(CounterRng& rng, ZigguratStats* stats) const {
  std::poisson_distribution<long> n_pos(lambda_pos_);
  std::poisson_distribution<long> n_neg(lambda_neg_);
  return draw_with(*this, positive_, negative_, n_pos, n_neg, rng, stats);
}

std::vector<double> GaIncrementSampler::sample(std::size_t n_sim, std::uint64_t seed, std::uint64_t increment,
                                               unsigned threads) const {
  std::vector<double> out(n_sim);
  const std::size_t n_batches = (n_sim + kBatchSize - 1) / kBatchSize;
  parallel_for_batches(
      n_batches,
      [&](std::size_t b) {
        CounterRng rng(StreamKey{seed, increment, b});
        std::poisson_distribution<long> n_pos(lambda_pos_);
        std::poisson_distribution<long> n_neg(lambda_neg_);
        const std::size_t end = std::min(n_sim, (b + 1) * kBatchSize);
        for (std::size_t k = b * kBatchSize; k < end; ++k) {
          out[k] = draw_with(*this, positive_, negative_, n_pos, n_neg, rng, nullptr);
        }
      },
      threads);
  return out;
}

std::vector<double> ga_increment_sampler(const AtsParams& p, double s, double t, double epsilon, std::size_t n_sim,
                                         std::uint64_t seed, int n_ret, unsigned threads) {
  return GaIncrementSampler(p, s, t, epsilon, n_ret).sample(n_sim, seed, 0, threads);
}

}  // namespace addmc
