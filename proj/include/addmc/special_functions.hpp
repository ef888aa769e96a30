#pragma once

#include <complex>

namespace addmc {

/// Modified Bessel function of the second kind K_nu(x), x > 0.
double bessel_k(double nu, double x);

/// e^x K_nu(x); finite for large x where K_nu itself underflows.
double bessel_k_scaled(double nu, double x);

/// Upper incomplete gamma Gamma(a, x) = int_x^inf z^{a-1} e^{-z} dz, a > 0, x >= 0.
double upper_incomplete_gamma(double a, double x);

/// log(1 + z) accurate for small |z| (principal branch).
std::complex<double> log1p(std::complex<double> z);

/// exp(z) - 1 accurate for small |z|.
std::complex<double> expm1(std::complex<double> z);

}  // namespace addmc
