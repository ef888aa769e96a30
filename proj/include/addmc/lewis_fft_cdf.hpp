#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

#include "addmc/additive_models.hpp"

namespace addmc {

/// Frequency/space discretization of one transform: gamma * h * N = 2 pi.
struct FftConfig {
  int M = 0;
  std::size_t N = 0;
  double h = 0.0;      // frequency step
  double gamma = 0.0;  // x step
  double shift = 0.0;  // contour shift a
};

/// Discrete-Fourier CDF of the increment f_t - f_s on x_j = (j - N/2) gamma.
struct CdfGrid {
  double s = 0.0;
  double t = 0.0;
  FftConfig config;
  std::vector<double> x;
  std::vector<double> p_hat;
};

inline constexpr int kMinGridExponent = 6;
inline constexpr int kMaxGridExponent = 20;

/// (p_plus + 1) / 2, the shift that minimizes the discretization bound.
double optimal_shift(const AnalyticityStrip& strip);

/// h(N) = (pi (p_plus + 1) / (b N^omega))^{1/(omega + 1)}: equalizes range and discretization errors.
double step_size(std::size_t N, const DecayBound& decay, const AnalyticityStrip& strip);

FftConfig make_fft_config(int M, const DecayBound& decay, const AnalyticityStrip& strip);

/// All N CDF values from one length-N FFT over the half-integer nodes (l + 1/2) h.
CdfGrid build_cdf_grid(const AdditiveModel& model, double s, double t, int M);

/// Same, reusing a decay bound computed by the caller.
CdfGrid build_cdf_grid(const AdditiveModel& model, double s, double t, int M, const DecayBound& decay);

/// Lewis CDF by adaptive quadrature along Im(u) = -a, 0 < a < p_plus + 1.
/// Absolute accuracy is about max(1e-12, 1e-13 e^{-a x}); pick a small a for x << 0.
double cdf_reference(const AdditiveModel& model, double s, double t, double x, double a);

/// Two columns: x, p_hat.
void write_csv(std::ostream& out, const CdfGrid& grid);

}  // namespace addmc
