#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "addmc/config.hpp"

namespace addmc {

using cplx = std::complex<double>;

/// Power-law ATS: k_t = k_bar t^beta, eta_t = eta_bar t^delta, sigma_t = sigma_bar.
struct AtsParams {
  double alpha = 2.0 / 3.0;
  double beta = 1.0;
  double delta = -0.5;
  double k_bar = 1.0;
  double eta_bar = 1.0;
  double sigma_bar = 0.2;

  /// Throws ConfigError naming the offending field.
  void validate() const;

  /// Parameter set used throughout the numerical experiments.
  static AtsParams reference(double alpha);
};

AtsParams ats_params_from_config(const KeyValues& kv);

struct TimeParams {
  double k = 0.0;
  double eta = 0.0;
  double sigma = 0.0;
};

/// phi is analytic for Im(u) in (-(p_plus + 1), p_minus).
struct AnalyticityStrip {
  double p_minus = 0.0;
  double p_plus = 0.0;

  double lower() const { return -(p_plus + 1.0); }
  double upper() const { return p_minus; }
  /// Closed-strip membership of Im(u), with a relative slack for boundary evaluation.
  bool admits(double imag_part) const;
};

/// |phi_{s,t}(u - i a)| <= amplitude * exp(-rate * u^exponent).
struct DecayBound {
  double amplitude = 1.0;
  double rate = 0.0;
  double exponent = 1.0;
};

/// Margin applied to the asymptotic decay coefficient: rate = 0.99 * coefficient.
inline constexpr double kDecayRateMargin = 0.99;

/// Cap on (p_plus + 1)/2 * sqrt(t - s). A wider strip would put e^{a |x|} past
/// double range on the +-5 sqrt(t - s) window (Black-Scholes-like limits).
inline constexpr double kMaxScaledShift = 5.0;

/// Interface shared by every additive process the sampler can consume.
/// Implementations are immutable; all members are safe to call concurrently.
class AdditiveModel {
 public:
  virtual ~AdditiveModel() = default;

  /// ln phi_t(u) without strip checks; t = 0 gives 0.
  virtual cplx log_char_fn(cplx u, double t) const = 0;
  virtual AnalyticityStrip strip(double t) const = 0;
  virtual DecayBound decay_bound(double s, double t) const = 0;

  /// strip(t) narrowed so that the optimal shift respects kMaxScaledShift; the
  /// strip the Fourier inversion and its error bounds work on.
  AnalyticityStrip inversion_strip(double s, double t) const;

  /// phi_t(u). Throws DomainError when Im(u) leaves the strip of time t.
  cplx char_fn(cplx u, double t) const;
  /// phi_t(u) / phi_s(u) on the strip of time t.
  cplx increment_char_fn(cplx u, double s, double t) const;
  cplx log_increment_char_fn(cplx u, double s, double t) const;

 protected:
  /// Smallest amplitude making the bound hold on a dense frequency scan at
  /// the optimal shift (p_plus + 1) / 2.
  double calibrate_amplitude(double s, double t, double rate, double exponent) const;
};

TimeParams ats_time_params(const AtsParams& p, double t);

/// ln L_t(u; k, alpha) = (t/k) ((1-alpha)/alpha) {1 - (1 + u k/(1-alpha))^alpha}, principal branch.
cplx log_L(cplx u, double k, double alpha, double t);

AnalyticityStrip ats_strip(const AtsParams& p, double t);

class AtsModel final : public AdditiveModel {
 public:
  explicit AtsModel(const AtsParams& params);

  const AtsParams& params() const { return params_; }

  cplx log_char_fn(cplx u, double t) const override;
  AnalyticityStrip strip(double t) const override;
  DecayBound decay_bound(double s, double t) const override;

  /// ((1-alpha)^{1-alpha} / (2^alpha alpha)) t sigma_t^{2 alpha} / k_t^{1-alpha}; zero at t = 0.
  double decay_coefficient(double t) const;

 private:
  AtsParams params_;
};

/// nu_t(x) for the ATS jump measure. Throws DomainError at x = 0 or t <= 0.
double jump_measure_density(const AtsParams& p, double x, double t);

/// phi_1(u t^zeta) for a self-similar process.
cplx sato_char_fn(const std::function<cplx(cplx)>& phi_1, double zeta, cplx u, double t);

/// Self-similar additive process built from its law at t = 1.
class SatoModel final : public AdditiveModel {
 public:
  /// `unit_decay` describes |phi_1(u)| <~ exp(-rate u^exponent).
  SatoModel(std::function<cplx(cplx)> log_phi_1, AnalyticityStrip unit_strip, double zeta,
            DecayBound unit_decay);

  cplx log_char_fn(cplx u, double t) const override;
  AnalyticityStrip strip(double t) const override;
  DecayBound decay_bound(double s, double t) const override;

 private:
  std::function<cplx(cplx)> log_phi_1_;
  AnalyticityStrip unit_strip_;
  double zeta_;
  DecayBound unit_decay_;
};

struct ExistenceReport {
  bool g1_non_decreasing = true;
  bool g2_non_decreasing = true;
  bool g3_non_decreasing = true;
  bool skew_variance_vanishes = true;  // t sigma_t^2 eta_t -> 0
  bool stable_term_vanishes = true;    // t sigma_t^{2a} eta_t^a / k_t^{1-a} -> 0

  bool passed() const {
    return g1_non_decreasing && g2_non_decreasing && g3_non_decreasing && skew_variance_vanishes &&
           stable_term_vanishes;
  }
};

/// 64 log-spaced points on [t_min / 10, t_max].
std::vector<double> default_existence_grid(double t_min, double t_max);

/// Sufficient existence conditions checked on a finite increasing grid of times.
ExistenceReport existence_check(const AtsParams& p, const std::vector<double>& times);

}  // namespace addmc
