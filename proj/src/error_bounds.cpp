#include "addmc/error_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "addmc/errors.hpp"
#include "addmc/quadrature.hpp"
#include "addmc/special_functions.hpp"

namespace addmc {

namespace {

constexpr double kPi = std::numbers::pi;

// 2 int_0^inf g for an even integrand, cut where g falls below 1e-16 of its start.
double symmetric_integral(const std::function<double(double)>& g) {
  const double g0 = std::max(g(0.0), g(1.0));
  if (!std::isfinite(g0)) return std::numeric_limits<double>::infinity();
  double upper = 1.0;
  while (g(upper) > 1e-16 * g0 || g(1.5 * upper) > 1e-16 * g0) {
    upper *= 1.5;
    if (upper > 1e9) return std::numeric_limits<double>::infinity();
  }
  try {
    return 2.0 * integrate(g, 0.0, upper, 1e-12 * g0 * upper, 32).value;
  } catch (const NumericalError&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

CdfErrorReport cdf_error_bound(double x, double h, std::size_t N, const DecayBound& decay,
                               const AnalyticityStrip& strip, double moment) {
  if (!(h > 0.0) || N < 2) throw ConfigError("cdf_error_bound needs h > 0 and N >= 2");
  const double w = decay.exponent;
  const double b = decay.rate;
  const double c = strip.p_plus + 1.0;
  const double L = static_cast<double>(N) * h;
  CdfErrorReport r;
  r.range_term = decay.amplitude * std::exp(-0.5 * c * x) / (w * std::pow(b, 1.0 / w)) / L *
                 upper_incomplete_gamma(1.0 / w, b * std::pow(L, w));
  const double alias = std::exp(-kPi * c / h);
  r.discretization_term = (alias + alias * std::exp(-c * x) * moment) / (1.0 - alias * alias);
  return r;
}

double boundary_moment(const AdditiveModel& model, double s, double t) {
  const double c = model.inversion_strip(s, t).p_plus + 1.0;
  const double m = model.increment_char_fn(cplx(0.0, -c), s, t).real();
  if (!std::isfinite(m)) throw DomainError("boundary moment E[e^{(p_plus + 1) X}] diverges");
  return m;
}

CdfErrorReport cdf_error_bound_M(const AdditiveModel& model, double s, double t, int M, double x,
                                 const DecayBound& decay) {
  const AnalyticityStrip strip = model.inversion_strip(s, t);
  const FftConfig config = make_fft_config(M, decay, strip);
  return cdf_error_bound(x, config.h, config.N, decay, strip, boundary_moment(model, s, t));
}

PayoffEnvelope european_call_envelope(double moneyness, double x0, double xK, const AnalyticityStrip& strip) {
  if (!(xK > x0)) throw ConfigError("payoff envelope needs x0 < xK");
  const double k = std::exp(-moneyness);
  auto v = [&](double x) { return std::max(std::exp(x) - k, 0.0); };
  PayoffEnvelope e;
  e.v_x0 = v(x0);
  e.v_xK = v(xK);
  e.sup_v = v(xK);
  e.sup_dv = std::exp(xK);
  e.kinks = 1;
  const double log_k = -moneyness;
  // int_A^inf (e^x - k) e^{-c x} dx with c = p_plus + 1 > 1
  const double c = strip.p_plus + 1.0;
  const double a = std::max(xK, log_k);
  e.right_tail = std::exp((1.0 - c) * a) / (c - 1.0) - k * std::exp(-c * a) / c;
  // int_{log k}^{x0} (e^x - k) e^{p x} dx, empty when x0 <= log k
  const double p = strip.p_minus;
  if (x0 > log_k) {
    e.left_tail = (std::exp((1.0 + p) * x0) - std::pow(k, 1.0 + p)) / (1.0 + p) -
                  k * (std::exp(p * x0) - std::pow(k, p)) / p;
  }
  return e;
}

double abs_char_fn_integral(const AdditiveModel& model, double s, double t, double imag_part) {
  auto g = [&](double u) { return std::abs(model.increment_char_fn(cplx(u, imag_part), s, t)); };
  return symmetric_integral(g);
}

double abs_u_char_fn_integral(const AdditiveModel& model, double s, double t) {
  auto g = [&](double u) { return u * std::abs(model.increment_char_fn(cplx(u, 0.0), s, t)); };
  // g vanishes at 0, so the cut-off is relative to a scanned peak
  double peak = 0.0;
  for (double u = 0.25; u < 1e4; u *= 1.25) peak = std::max(peak, g(u));
  double upper = 1.0;
  while (g(upper) > 1e-16 * peak || g(1.5 * upper) > 1e-16 * peak) {
    upper *= 1.5;
    if (upper > 1e9) return std::numeric_limits<double>::infinity();
  }
  return 2.0 * integrate(g, 0.0, upper, 1e-12 * peak * upper, 32).value;
}

BiasReport bias_bound(const PayoffEnvelope& v, const TruncatedCdf& tc, const FftConfig& config,
                      const AdditiveModel& model, double s, double t, const DecayBound& decay) {
  if (tc.x.size() < 2) throw ConfigError("bias_bound needs a non-empty truncation window");
  const AnalyticityStrip strip = model.inversion_strip(s, t);
  const double x0 = tc.x.front();
  const double xK = tc.x.back();
  const auto K = static_cast<double>(tc.intervals());

  BiasReport r;
  const CdfErrorReport cdf =
      cdf_error_bound(x0, config.h, config.N, decay, strip, boundary_moment(model, s, t));
  r.cdf_component = (v.v_x0 + v.v_xK + (2.0 * K + v.kinks) * v.sup_v + 2.0 * v.sup_dv) * cdf.total();

  // right tail decays like e^{-(p_plus + 1) x}, left tail like e^{p_minus x}
  const double c = strip.p_plus + 1.0;
  const double p = strip.p_minus;
  const double phi_plus = abs_char_fn_integral(model, s, t, -c * (1.0 - kEdgeOffset));
  const double phi_minus = abs_char_fn_integral(model, s, t, p * (1.0 - kEdgeOffset));
  const double right = v.v_xK * std::exp(-c * xK) / c + v.right_tail;
  const double left = v.v_x0 * std::exp(p * x0) / p + v.left_tail;
  auto part = [](double phi, double tail) { return tail == 0.0 ? 0.0 : phi / (2.0 * kPi) * tail; };
  r.truncation_component = part(phi_plus, right) + part(phi_minus, left);

  r.interpolation_component = tc.gamma * tc.gamma / (2.0 * kPi) * (xK - x0) * v.sup_dv *
                              abs_u_char_fn_integral(model, s, t);
  return r;
}

}  // namespace addmc
