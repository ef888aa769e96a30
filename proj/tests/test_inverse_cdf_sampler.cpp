#include <doctest.h>

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <sstream>

#include "addmc/errors.hpp"
#include "addmc/inverse_cdf_sampler.hpp"
#include "addmc/parallel.hpp"
#include "support.hpp"

using namespace addmc;

namespace {

const AtsModel kModel(AtsParams::reference(2.0 / 3.0));
constexpr double kMonth = 1.0 / 12.0;

TruncatedCdf month_window(int M = 13) { return truncate_grid(build_cdf_grid(kModel, 0.0, kMonth, M)); }

// Gaussian CDF knots on [-3, 3] with step gamma.
TruncatedCdf gaussian_knots(double gamma) {
  TruncatedCdf tc;
  tc.gamma = gamma;
  const int half = static_cast<int>(std::lround(3.0 / gamma));
  for (int j = -half; j <= half; ++j) {
    tc.x.push_back(j * gamma);
    tc.p.push_back(testing::normal_cdf(j * gamma));
  }
  return tc;
}

// Max |x(U) - Phi^{-1}(U)| skipping a fraction `skip` of the intervals at each end.
double max_inverse_error(const InverseInterpolant& inv, double skip) {
  const boost::math::normal_distribution<double> n01;
  double worst = 0.0;
  const auto& p = inv.p();
  const auto k = p.size() - 1;
  const auto first = static_cast<std::size_t>(skip * k);
  for (std::size_t j = first; j < k - first; ++j) {
    for (int i = 1; i < 8; ++i) {
      const double u = p[j] + (p[j + 1] - p[j]) * i / 8.0;
      worst = std::max(worst, std::abs(inv.evaluate(u) - boost::math::quantile(n01, u)));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("truncation window") {
  const TruncatedCdf tc = month_window();
  CHECK(std::abs(tc.x.back() - 5.0 / std::sqrt(12.0)) <= tc.gamma);
  CHECK(tc.x.front() == doctest::Approx(-tc.x.back()));
  CHECK(tc.p.front() > 0.0);
  CHECK(tc.p.back() < 1.0);
  for (std::size_t j = 1; j < tc.p.size(); ++j) CHECK(tc.p[j] > tc.p[j - 1]);
  for (std::size_t j = 1; j < tc.x.size(); ++j) CHECK(tc.x[j] - tc.x[j - 1] == doctest::Approx(tc.gamma));
  CHECK_THROWS_AS(truncate_grid(build_cdf_grid(kModel, 0.0, kMonth, 8), 0.0), ConfigError);
}

TEST_CASE("mass outside the window is negligible") {
  for (double t : {1.0 / 252, 1.0 / 52, kMonth, 0.25, 0.5, 1.0, 2.0, 5.0}) {
    const TruncatedCdf tc = truncate_grid(build_cdf_grid(kModel, 0.0, t, 13));
    CAPTURE(t);
    CHECK(std::abs(tc.x.front() + 5.0 * std::sqrt(t)) <= tc.gamma);
    // the right edge only retreats where 1 - P is at double resolution
    CHECK(1.0 - tc.p.back() < 1e-14);
    // below -5 sqrt(t) the left tail keeps ~1e-9 from six months on
    if (t <= 0.25) CHECK(tc.p.front() < 1e-9);
  }
}

TEST_CASE("linear inverse") {
  TruncatedCdf two;
  two.x = {-1.0, 1.0};
  two.p = {0.25, 0.75};
  const InverseInterpolant l2 = build_linear_inverse(two);
  CHECK(l2.evaluate(0.5) == doctest::Approx(0.0));
  CHECK(l2.evaluate(0.25) == -1.0);
  CHECK(l2.evaluate(0.75) == 1.0);
  // clamped outside the knot range
  CHECK(l2.evaluate(0.01) == -1.0);
  CHECK(l2.evaluate(0.99) == 1.0);

  const TruncatedCdf tc = month_window(10);
  const InverseInterpolant lin = build_linear_inverse(tc);
  for (std::size_t j = 0; j < tc.p.size(); ++j) CHECK(lin.evaluate(tc.p[j]) == doctest::Approx(tc.x[j]).epsilon(1e-14));
  for (std::size_t j = 1; j < tc.p.size(); j += 17) {
    if (tc.p[j] - tc.p[j - 1] < 1e-8) continue;  // midpoint in p is lost to rounding
    CHECK(lin.evaluate(0.5 * (tc.p[j - 1] + tc.p[j])) == doctest::Approx(0.5 * (tc.x[j - 1] + tc.x[j])));
  }
  CHECK(count_monotonicity_violations(lin) == 0);

  TruncatedCdf flat = two;
  flat.p = {0.5, 0.5};
  CHECK_THROWS_AS(build_linear_inverse(flat), ConfigError);
}

TEST_CASE("spline inverse") {
  const TruncatedCdf tc = month_window();
  const InverseInterpolant sp = build_spline_inverse(tc);
  CHECK(sp.kind() == InterpolationKind::spline);
  for (std::size_t j = 0; j < tc.p.size(); ++j) CHECK(std::abs(sp.evaluate(tc.p[j]) - tc.x[j]) < 1e-13);
  CHECK(count_monotonicity_violations(sp) == 0);

  TruncatedCdf small;
  small.x = {-1.0, 0.0, 1.0};
  small.p = {0.1, 0.5, 0.9};
  CHECK_THROWS_AS(build_spline_inverse(small), ConfigError);
}

TEST_CASE("interval location") {
  const InverseInterpolant sp = build_spline_inverse(month_window(9));
  const auto& p = sp.p();
  CounterRng rng({7, 0, 0});
  for (int i = 0; i < 20000; ++i) {
    const double u = p.front() + rng.uniform() * (p.back() - p.front());
    const std::size_t j = sp.locate(u);
    CHECK(p[j] <= u);
    CHECK(u < p[j + 1]);
  }
  CHECK(sp.locate(0.0) == 0);
  CHECK(sp.locate(1.0) == p.size() - 2);
}

TEST_CASE("spline error on a Gaussian inverse falls like gamma^4 away from the ends") {
  // Natural end conditions pin x'' = 0 where the true inverse is steepest, so
  // the first and last intervals converge at gamma^2; the interior at gamma^4.
  double prev_lin = 0.0, prev_sp = 0.0;
  for (double gamma : {0.1, 0.05, 0.025, 0.0125}) {
    const TruncatedCdf tc = gaussian_knots(gamma);
    const double e_lin = max_inverse_error(build_linear_inverse(tc), 0.1);
    const double e_sp = max_inverse_error(build_spline_inverse(tc), 0.1);
    CAPTURE(gamma);
    CHECK(e_sp < e_lin);
    if (prev_sp > 0.0) {
      CHECK(prev_lin / e_lin > 4.0 * 0.9);
      CHECK(prev_sp / e_sp >= 16.0 * 0.9);
    }
    prev_lin = e_lin;
    prev_sp = e_sp;
  }
}

TEST_CASE("samples follow the CDF") {
  const CdfGrid grid = build_cdf_grid(kModel, 0.0, kMonth, 13);
  const TruncatedCdf tc = truncate_grid(grid);
  const std::size_t n = 1'000'000;
  std::vector<double> xs = sample_increments(build_spline_inverse(tc), n, 11);
  std::sort(xs.begin(), xs.end());
  double d = 0.0;
  for (double x = -0.6; x <= 0.6; x += 0.003) {
    const double f_n = static_cast<double>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) / n;
    d = std::max(d, std::abs(f_n - cdf_reference(kModel, 0.0, kMonth, x, 1.0)));
  }
  CHECK(d <= 2.0 / std::sqrt(static_cast<double>(n)));

  const std::vector<double> lin = sample_increments(build_linear_inverse(tc), n, 12);
  CHECK(testing::ks_distance(xs, lin) <= 3.0 / std::sqrt(1e6) * std::sqrt(2.0));
}

TEST_CASE("martingale at 1e7 draws") {
  const InverseInterpolant sp = build_spline_inverse(month_window());
  const testing::MeanSe m = testing::exp_mean(sample_increments(sp, 10'000'000, 3));
  CHECK(std::abs(m.mean - 1.0) <= 3.0 * m.se);
}

TEST_CASE("sampling is reproducible and independent of threads") {
  const InverseInterpolant sp = build_spline_inverse(month_window(10));
  const std::size_t n = 3 * kBatchSize + 17;
  const auto a = sample_increments(sp, n, 5, 2, 1);
  const auto b = sample_increments(sp, n, 5, 2, 4);
  const auto c = sample_increments(sp, n, 5, 2, 0);
  CHECK(a == b);
  CHECK(a == c);
  CHECK(a != sample_increments(sp, n, 6, 2, 1));
  CHECK(a != sample_increments(sp, n, 5, 3, 1));
  CHECK_THROWS_AS(sample_increments(sp, 0, 5), ConfigError);
}

TEST_CASE("paths") {
  const std::size_t n = 200'000;
  SamplerSettings settings;
  settings.M = 11;
  settings.seed = 9;

  const PathMatrix single = simulate_paths(kModel, {0.0, kMonth}, n, settings);
  const auto direct = sample_increments(build_spline_inverse(month_window(11)), n, 9, 0);
  for (std::size_t k = 0; k < n; k += 997) CHECK(single(k, 1) == direct[k]);

  const std::vector<double> times{0.0, 0.25, 0.5, 1.0};
  const PathMatrix paths = simulate_paths(kModel, times, n, settings);
  CHECK(paths.n_dates() == 4);
  for (std::size_t i = 1; i < times.size(); ++i) {
    std::vector<double> f(n);
    for (std::size_t k = 0; k < n; ++k) f[k] = paths(k, i);
    const testing::MeanSe m = testing::exp_mean(f);
    CAPTURE(i);
    CHECK(std::abs(m.mean - 1.0) <= 3.0 * m.se);
  }
  // increments over disjoint intervals are uncorrelated
  std::vector<double> d1(n), d2(n);
  double m1 = 0, m2 = 0;
  for (std::size_t k = 0; k < n; ++k) {
    d1[k] = paths(k, 1);
    d2[k] = paths(k, 2) - paths(k, 1);
    m1 += d1[k] / n;
    m2 += d2[k] / n;
  }
  double c12 = 0, v1 = 0, v2 = 0;
  for (std::size_t k = 0; k < n; ++k) {
    c12 += (d1[k] - m1) * (d2[k] - m2);
    v1 += (d1[k] - m1) * (d1[k] - m1);
    v2 += (d2[k] - m2) * (d2[k] - m2);
  }
  CHECK(std::abs(c12 / std::sqrt(v1 * v2)) <= 3.0 / std::sqrt(static_cast<double>(n)));

  CHECK_THROWS_AS(simulate_paths(kModel, {0.1, 0.2}, 10, settings), ConfigError);
  CHECK_THROWS_AS(simulate_paths(kModel, {0.0, 0.2, 0.2}, 10, settings), ConfigError);
}

TEST_CASE("path CSV export") {
  SamplerSettings settings;
  settings.M = 8;
  const PathMatrix paths = simulate_paths(kModel, {0.0, 0.5, 1.0}, 5, settings);
  std::ostringstream out;
  write_csv(out, paths);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t=0,t=0.5,t=1");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.rfind("0,", 0) == 0);
  }
  CHECK(rows == 5);
}
