#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>

#include "addmc/special_functions.hpp"

using namespace addmc;

namespace {

// K_nu(x) = int_0^inf exp(-x cosh s) cosh(nu s) ds
double bessel_k_by_quadrature(double nu, double x) {
  boost::math::quadrature::exp_sinh<double> q;
  auto f = [&](double s) {
    const double c = -x * std::cosh(s);
    return 0.5 * (std::exp(c + nu * s) + std::exp(c - nu * s));
  };
  return q.integrate(f, 0.0, std::numeric_limits<double>::infinity());
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("bessel K matches the cosh integral and boost") {
  for (double nu : {0.5, 5.0 / 6.0, 7.0 / 6.0, 1.5}) {
    for (double x : {1e-3, 0.05, 0.3, 1.0, 4.0, 25.0, 120.0}) {
      CAPTURE(nu);
      CAPTURE(x);
      const double k = bessel_k(nu, x);
      CHECK(rel(k, bessel_k_by_quadrature(nu, x)) < 1e-10);
      CHECK(rel(k, boost::math::cyl_bessel_k(nu, x)) < 1e-10);
    }
  }
}

TEST_CASE("bessel K frozen values") {
  // 40-digit evaluations
  CHECK(rel(bessel_k(7.0 / 6.0, 0.3), 3.982601105983572216) < 1e-12);
  CHECK(rel(bessel_k(7.0 / 6.0, 25.0), 3.557884716348130988e-12) < 1e-12);
}

TEST_CASE("scaled bessel K survives underflow and tiny arguments") {
  const double x = 900.0;
  CHECK(bessel_k(1.5, x) == doctest::Approx(0.0));
  // K_{3/2}(x) = sqrt(pi/(2x)) e^{-x} (1 + 1/x)
  CHECK(rel(bessel_k_scaled(1.5, x), std::sqrt(M_PI / (2 * x)) * (1 + 1 / x)) < 1e-12);
  const double tiny = 1e-14;
  CHECK(rel(bessel_k_scaled(7.0 / 6.0, tiny), 0.5 * std::tgamma(7.0 / 6.0) * std::pow(2 / tiny, 7.0 / 6.0)) < 1e-10);
}

TEST_CASE("upper incomplete gamma") {
  for (double x : {0.0, 0.1, 1.0, 3.0, 30.0}) CHECK(rel(upper_incomplete_gamma(1.0, x), std::exp(-x)) < 1e-14);
  for (double a : {0.25, 0.75, 1.5, 4.0}) CHECK(rel(upper_incomplete_gamma(a, 0.0), std::tgamma(a)) < 1e-14);
  CHECK(rel(upper_incomplete_gamma(0.75, 2.5), 0.06062087735535535586) < 1e-12);
  for (double a : {0.3, 0.75, 2.0, 7.5}) {
    for (double x : {1e-4, 0.2, 1.0, 2.5, 10.0, 80.0}) {
      CAPTURE(a);
      CAPTURE(x);
      CHECK(rel(upper_incomplete_gamma(a, x), boost::math::tgamma(a, x)) < 1e-12);
    }
  }
}

TEST_CASE("complex log1p and expm1 keep small arguments accurate") {
  const std::complex<double> z(1e-12, -3e-13);
  CHECK(std::abs(addmc::log1p(z) - (z - z * z / 2.0)) < 1e-15 * std::abs(z));
  CHECK(std::abs(addmc::expm1(z) - (z + z * z / 2.0)) < 1e-15 * std::abs(z));
  const std::complex<double> w(0.7, -1.3);
  CHECK(std::abs(addmc::log1p(w) - std::log(1.0 + w)) < 1e-15);
  CHECK(std::abs(addmc::expm1(w) - (std::exp(w) - 1.0)) < 1e-15);
}
