#include "addmc/additive_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "addmc/errors.hpp"
#include "addmc/special_functions.hpp"

namespace addmc {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_time(double t, const char* what) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError(std::string(what) + ": time must be positive");
}

void require_increment(double s, double t) {
  if (!(s >= 0.0) || !(t > s)) throw DomainError("increment requires 0 <= s < t");
}

// sqrt((1/2 + eta)^2 + 2 (1 - alpha) / (sigma^2 k)), the modulus of the strip roots.
double strip_radius(const AtsParams& p, const TimeParams& tp) {
  const double skew = 0.5 + tp.eta;
  return std::sqrt(skew * skew + 2.0 * (1.0 - p.alpha) / (tp.sigma * tp.sigma * tp.k));
}

}  // namespace

void AtsParams::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (!std::isfinite(beta)) throw ConfigError("beta must be finite");
  if (!std::isfinite(delta)) throw ConfigError("delta must be finite");
  if (!(k_bar > 0.0) || !std::isfinite(k_bar)) throw ConfigError("k_bar must be positive");
  if (!(eta_bar >= 0.0) || !std::isfinite(eta_bar)) throw ConfigError("eta_bar must be non-negative");
  if (!(sigma_bar > 0.0) || !std::isfinite(sigma_bar)) throw ConfigError("sigma_bar must be positive");
}

AtsParams AtsParams::reference(double alpha) {
  AtsParams p;
  p.alpha = alpha;
  return p;
}

AtsParams ats_params_from_config(const KeyValues& kv) {
  AtsParams p;
  p.alpha = get_double(kv, "alpha", p.alpha);
  p.beta = get_double(kv, "beta", p.beta);
  p.delta = get_double(kv, "delta", p.delta);
  p.k_bar = get_double(kv, "k_bar", p.k_bar);
  p.eta_bar = get_double(kv, "eta_bar", p.eta_bar);
  p.sigma_bar = get_double(kv, "sigma_bar", p.sigma_bar);
  p.validate();
  return p;
}

bool AnalyticityStrip::admits(double imag_part) const {
  const double lo = lower();
  const double hi = upper();
  return imag_part >= lo - 1e-12 * (1.0 + std::fabs(lo)) && imag_part <= hi + 1e-12 * (1.0 + std::fabs(hi));
}

cplx AdditiveModel::char_fn(cplx u, double t) const {
  require_time(t, "char_fn");
  if (!strip(t).admits(u.imag())) throw DomainError("char_fn: Im(u) outside the analyticity strip");
  return std::exp(log_char_fn(u, t));
}

cplx AdditiveModel::log_increment_char_fn(cplx u, double s, double t) const {
  require_increment(s, t);
  if (!strip(t).admits(u.imag())) {
    throw DomainError("increment_char_fn: Im(u) outside the analyticity strip");
  }
  return log_char_fn(u, t) - log_char_fn(u, s);
}

cplx AdditiveModel::increment_char_fn(cplx u, double s, double t) const {
  return std::exp(log_increment_char_fn(u, s, t));
}

AnalyticityStrip AdditiveModel::inversion_strip(double s, double t) const {
  require_increment(s, t);
  AnalyticityStrip st = strip(t);
  const double c_max = 2.0 * kMaxScaledShift / std::sqrt(t - s);
  st.p_plus = std::min(st.p_plus, c_max - 1.0);
  st.p_minus = std::min(st.p_minus, c_max);
  return st;
}

double AdditiveModel::calibrate_amplitude(double s, double t, double rate, double exponent) const {
  const double shift = 0.5 * (inversion_strip(s, t).p_plus + 1.0);
  // Beyond rate * u^w = 5000 the 1% rate margin alone buys exp(-50).
  const double u_end = std::pow(5000.0 / rate, 1.0 / exponent);
  const double u_start = std::min(1e-3, 1e-6 * u_end);
  constexpr int kNodes = 8000;
  double best = log_increment_char_fn(cplx(0.0, -shift), s, t).real();
  for (int i = 0; i < kNodes; ++i) {
    const double u = u_start * std::pow(u_end / u_start, static_cast<double>(i) / (kNodes - 1));
    const double v = log_increment_char_fn(cplx(u, -shift), s, t).real() + rate * std::pow(u, exponent);
    best = std::max(best, v);
  }
  // inflate the grid maximum by 1% to cover peaks between nodes
  return 1.01 * std::exp(best);
}

TimeParams ats_time_params(const AtsParams& p, double t) {
  require_time(t, "ats_time_params");
  return {p.k_bar * std::pow(t, p.beta), p.eta_bar * std::pow(t, p.delta), p.sigma_bar};
}

cplx log_L(cplx u, double k, double alpha, double t) {
  const double scale = (t / k) * (1.0 - alpha) / alpha;
  const cplx z = u * (k / (1.0 - alpha));
  cplx base = 1.0 + z;
  if (base.real() <= 0.0) {
    // Im(base) vanishes only on the real axis; the strip boundary maps to base = 0.
    if (base.real() > -1e-12 && std::fabs(base.imag()) < 1e-12) {
      base = 0.0;
    } else {
      throw DomainError("log_L: argument crosses the principal branch cut");
    }
  }
  if (base == 0.0) return scale;
  return -scale * expm1(alpha * log1p(z));
}

AnalyticityStrip ats_strip(const AtsParams& p, double t) {
  const TimeParams tp = ats_time_params(p, t);
  const double g = strip_radius(p, tp);
  const double skew = 0.5 + tp.eta;
  return {g - skew, skew + g - 1.0};
}

AtsModel::AtsModel(const AtsParams& params) : params_(params) { params_.validate(); }

cplx AtsModel::log_char_fn(cplx u, double t) const {
  if (t == 0.0) return 0.0;
  const TimeParams tp = ats_time_params(params_, t);
  const double s2 = tp.sigma * tp.sigma;
  const cplx w = kI * u * (0.5 + tp.eta) * s2 + u * u * s2 * 0.5;
  const cplx drift = log_L(cplx(tp.eta * s2, 0.0), tp.k, params_.alpha, t);
  return log_L(w, tp.k, params_.alpha, t) - kI * u * drift;
}

AnalyticityStrip AtsModel::strip(double t) const { return ats_strip(params_, t); }

double AtsModel::decay_coefficient(double t) const {
  if (t == 0.0) return 0.0;
  const double a = params_.alpha;
  const TimeParams tp = ats_time_params(params_, t);
  const double prefactor = std::pow(1.0 - a, 1.0 - a) / (std::pow(2.0, a) * a);
  return prefactor * t * std::pow(tp.sigma, 2.0 * a) / std::pow(tp.k, 1.0 - a);
}

DecayBound AtsModel::decay_bound(double s, double t) const {
  require_increment(s, t);
  const double coefficient = decay_coefficient(t) - decay_coefficient(s);
  if (!(coefficient > 0.0)) {
    throw DomainError("decay_bound: t sigma_t^{2 alpha} / k_t^{1 - alpha} is not increasing");
  }
  DecayBound d;
  d.rate = kDecayRateMargin * coefficient;
  d.exponent = 2.0 * params_.alpha;
  d.amplitude = calibrate_amplitude(s, t, d.rate, d.exponent);
  if (d.amplitude <= 1e6) return d;
  // Nearly Gaussian laws (k_t -> 0) reach the u^{2 alpha} regime only where
  // phi has long underflowed; bound them by the diffusion part instead.
  DecayBound g;
  g.rate = kDecayRateMargin * 0.5 * params_.sigma_bar * params_.sigma_bar * (t - s);
  g.exponent = 2.0;
  g.amplitude = calibrate_amplitude(s, t, g.rate, g.exponent);
  return g.amplitude < d.amplitude ? g : d;
}

double jump_measure_density(const AtsParams& p, double x, double t) {
  if (x == 0.0) throw DomainError("jump_measure_density: x = 0 is a non-integrable singularity");
  const TimeParams tp = ats_time_params(p, t);
  const double a = p.alpha;
  const double g = strip_radius(p, tp);
  const double log_c = std::log(2.0 / (std::tgamma(1.0 - a) * std::sqrt(2.0 * std::numbers::pi))) +
                       (1.0 - a) * std::log((1.0 - a) / tp.k) + 2.0 * a * std::log(tp.sigma) +
                       (a + 0.5) * std::log(g);
  const double ax = std::fabs(x);
  const double log_value = std::log(t) + log_c - (0.5 + a) * std::log(ax) - (0.5 + tp.eta) * x - ax * g;
  return std::exp(log_value) * bessel_k_scaled(a + 0.5, ax * g);
}

cplx sato_char_fn(const std::function<cplx(cplx)>& phi_1, double zeta, cplx u, double t) {
  require_time(t, "sato_char_fn");
  return phi_1(u * std::pow(t, zeta));
}

SatoModel::SatoModel(std::function<cplx(cplx)> log_phi_1, AnalyticityStrip unit_strip, double zeta,
                     DecayBound unit_decay)
    : log_phi_1_(std::move(log_phi_1)), unit_strip_(unit_strip), zeta_(zeta), unit_decay_(unit_decay) {
  if (!(zeta > 0.0)) throw ConfigError("zeta must be positive");
}

cplx SatoModel::log_char_fn(cplx u, double t) const {
  if (t == 0.0) return 0.0;
  return log_phi_1_(u * std::pow(t, zeta_));
}

AnalyticityStrip SatoModel::strip(double t) const {
  require_time(t, "SatoModel::strip");
  const double scale = std::pow(t, zeta_);
  return {unit_strip_.p_minus / scale, (unit_strip_.p_plus + 1.0) / scale - 1.0};
}

DecayBound SatoModel::decay_bound(double s, double t) const {
  require_increment(s, t);
  const double w = unit_decay_.exponent;
  const double coefficient = unit_decay_.rate * (std::pow(t, zeta_ * w) - std::pow(s, zeta_ * w));
  DecayBound d;
  d.rate = kDecayRateMargin * coefficient;
  d.exponent = w;
  d.amplitude = calibrate_amplitude(s, t, d.rate, d.exponent);
  return d;
}

std::vector<double> default_existence_grid(double t_min, double t_max) {
  if (!(t_min > 0.0) || !(t_max > t_min)) throw ConfigError("existence grid needs 0 < t_min < t_max");
  constexpr int kPoints = 64;
  const double lo = t_min / 10.0;
  std::vector<double> grid(kPoints);
  for (int i = 0; i < kPoints; ++i) grid[i] = lo * std::pow(t_max / lo, static_cast<double>(i) / (kPoints - 1));
  return grid;
}

ExistenceReport existence_check(const AtsParams& p, const std::vector<double>& times) {
  ExistenceReport report;
  if (times.empty()) return report;
  const double a = p.alpha;
  auto non_decreasing = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (v[i] < v[i - 1] - 1e-12 * (1.0 + std::fabs(v[i - 1]))) return false;
    }
    return true;
  };
  std::vector<double> g1, g2, g3;
  for (const double t : times) {
    const TimeParams tp = ats_time_params(p, t);
    const double root = strip_radius(p, tp);
    const double skew = 0.5 + tp.eta;
    g1.push_back(skew - root);
    g2.push_back(-skew - root);
    g3.push_back(std::pow(t, 1.0 / a) * tp.sigma * tp.sigma / std::pow(tp.k, (1.0 - a) / a) * root);
  }
  report.g1_non_decreasing = non_decreasing(g1);
  report.g2_non_decreasing = non_decreasing(g2);
  report.g3_non_decreasing = non_decreasing(g3);

  // Small-time limits: along a decade-shrinking sequence the term must keep
  // decreasing with a positive power-law exponent at the smallest times.
  auto vanishes = [&](auto term) {
    std::vector<double> v;
    for (int j = 0; j <= 10; ++j) v.push_back(std::fabs(term(times.front() * std::pow(10.0, -j))));
    if (v.front() == 0.0) return v.back() == 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (!(v[i] < v[i - 1])) return false;
    }
    return std::log10(v[v.size() - 2] / v.back()) > 1e-3;
  };
  report.skew_variance_vanishes = vanishes([&](double t) {
    const TimeParams tp = ats_time_params(p, t);
    return t * tp.sigma * tp.sigma * tp.eta;
  });
  report.stable_term_vanishes = vanishes([&](double t) {
    const TimeParams tp = ats_time_params(p, t);
    return t * std::pow(tp.sigma, 2.0 * a) * std::pow(tp.eta, a) / std::pow(tp.k, 1.0 - a);
  });
  return report;
}

}  // namespace addmc
