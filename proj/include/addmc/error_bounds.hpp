#pragma once

#include <cstddef>

#include "addmc/additive_models.hpp"
#include "addmc/inverse_cdf_sampler.hpp"
#include "addmc/lewis_fft_cdf.hpp"

namespace addmc {

/// Error of the discrete Lewis CDF at one abscissa.
struct CdfErrorReport {
  double range_term = 0.0;           // frequencies beyond N h
  double discretization_term = 0.0;  // aliasing from the step h

  double total() const { return range_term + discretization_term; }
};

/// Bound on |P(x) - P_hat(x)| at shift a = (p_plus + 1) / 2. `boundary_moment` is
/// phi_{s,t}(-i (p_plus + 1)) = E[e^{(p_plus + 1) X}].
CdfErrorReport cdf_error_bound(double x, double h, std::size_t N, const DecayBound& decay,
                               const AnalyticityStrip& strip, double boundary_moment);

/// E[e^{(p_plus + 1)(f_t - f_s)}]; throws DomainError when it is not finite.
double boundary_moment(const AdditiveModel& model, double s, double t);

/// The bound at the balanced step h = h(2^M).
CdfErrorReport cdf_error_bound_M(const AdditiveModel& model, double s, double t, int M, double x,
                                 const DecayBound& decay);

/// Payoff data the bias bound needs on the truncation window [x0, xK].
struct PayoffEnvelope {
  double v_x0 = 0.0;  // |V(x0)|
  double v_xK = 0.0;  // |V(xK)|
  double sup_v = 0.0;
  double sup_dv = 0.0;
  int kinks = 0;                    // points where V is not differentiable
  double right_tail = 0.0;          // int_{xK}^inf |V(x)| e^{-(p_plus + 1) x} dx
  double left_tail = 0.0;           // int_{-inf}^{x0} |V(x)| e^{p_minus x} dx
};

/// V(x) = (e^x - e^{-m})^+ on the window, with closed-form tail integrals.
PayoffEnvelope european_call_envelope(double moneyness, double x0, double xK, const AnalyticityStrip& strip);

struct BiasReport {
  double cdf_component = 0.0;
  double truncation_component = 0.0;
  double interpolation_component = 0.0;

  double total() const { return cdf_component + truncation_component + interpolation_component; }
};

/// Relative distance from the strip edges at which the edge integrals are evaluated.
inline constexpr double kEdgeOffset = 1e-3;

/// int_R |phi_{s,t}(u + i c)| du by quadrature; +inf if it does not converge.
double abs_char_fn_integral(const AdditiveModel& model, double s, double t, double imag_part);

/// int_R |u phi_{s,t}(u)| du on the real axis.
double abs_u_char_fn_integral(const AdditiveModel& model, double s, double t);

/// Bias of E V(f_t - f_s) under the linear inverse: CDF error, truncation and interpolation parts.
BiasReport bias_bound(const PayoffEnvelope& payoff, const TruncatedCdf& tc, const FftConfig& config,
                      const AdditiveModel& model, double s, double t, const DecayBound& decay);

}  // namespace addmc
