#include "addmc/mc_pricing.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>

#include "addmc/errors.hpp"
#include "addmc/quadrature.hpp"

namespace addmc {

double OptionSpec::strike() const { return std::exp(-moneyness); }

void OptionSpec::validate() const {
  if (!(maturity > 0.0)) throw ConfigError("maturity must be positive");
  if (kind != PayoffKind::european_call && monitoring < 1) throw ConfigError("monitoring must be at least 1");
  if (kind == PayoffKind::down_and_in_put && !(barrier >= 0.0 && barrier < 1.0)) {
    throw ConfigError("barrier must lie in [0, 1)");
  }
}

double european_call_analytic(const AdditiveModel& model, double moneyness, double t) {
  constexpr double a = 0.5;
  if (!model.strip(t).admits(-a)) throw DomainError("european_call_analytic: contour outside the strip");
  const double strike = std::exp(-moneyness);
  auto integrand = [&](double u) {
    const cplx phi = model.char_fn(cplx(u, -a), t);
    return (std::polar(1.0, u * moneyness) * phi).real() / (u * u + 0.25);
  };
  double upper = 1.0;
  auto envelope = [&](double u) { return std::abs(model.char_fn(cplx(u, -a), t)) / (u * u); };
  while (envelope(upper) > 1e-16 || envelope(1.5 * upper) > 1e-16) {
    upper *= 1.5;
    if (upper > 1e9) throw NumericalError("european_call_analytic: characteristic function does not decay");
  }
  const int panels = 16 + static_cast<int>(std::ceil(upper * std::fabs(moneyness) / std::numbers::pi));
  const QuadratureResult r = integrate(integrand, 0.0, upper, 1e-12, panels);
  return 1.0 - std::sqrt(strike) / std::numbers::pi * r.value;
}

double black_scholes_call(double moneyness, double t, double sigma) {
  const double strike = std::exp(-moneyness);
  const double v = sigma * std::sqrt(t);
  const double d1 = (moneyness + 0.5 * v * v) / v;
  const double d2 = d1 - v;
  auto n = [](double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); };
  return n(d1) - strike * n(d2);
}

std::vector<double> moneyness_grid(double t, int count) {
  if (count < 2) throw ConfigError("moneyness grid needs at least 2 points");
  const double half = 0.2 * std::sqrt(t);
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) g[i] = -half + 2.0 * half * i / (count - 1);
  return g;
}

std::vector<double> monitoring_times(double maturity, int n) {
  if (!(maturity > 0.0) || n < 1) throw ConfigError("monitoring needs maturity > 0 and n >= 1");
  std::vector<double> times(n + 1);
  for (int i = 0; i <= n; ++i) times[i] = maturity * i / n;
  return times;
}

namespace {

void check_grid(const PathMatrix& paths, const OptionSpec& spec) {
  spec.validate();
  if (paths.n_dates() < 2 || paths.n_paths == 0) throw ConfigError("empty path matrix");
  if (std::fabs(paths.times.back() - spec.maturity) > 1e-12 * (1.0 + spec.maturity)) {
    throw ConfigError("path grid ends at " + std::to_string(paths.times.back()) + ", option matures at " +
                      std::to_string(spec.maturity));
  }
  if (spec.kind != PayoffKind::european_call && static_cast<int>(paths.n_dates()) - 1 != spec.monitoring) {
    throw ConfigError("path grid has " + std::to_string(paths.n_dates() - 1) + " monitoring dates, option needs " +
                      std::to_string(spec.monitoring));
  }
}

double payoff(const OptionSpec& spec, const double* spot, std::size_t n_dates) {
  const double strike = spec.strike();
  const std::size_t first = spec.include_initial_date ? 0 : 1;
  switch (spec.kind) {
    case PayoffKind::european_call:
      return std::max(spot[n_dates - 1] - strike, 0.0);
    case PayoffKind::asian_call: {
      double sum = 0.0;
      for (std::size_t i = first; i < n_dates; ++i) sum += spot[i];
      return std::max(sum / static_cast<double>(n_dates - first) - strike, 0.0);
    }
    case PayoffKind::lookback_put:
      return std::max(strike - *std::min_element(spot + first, spot + n_dates), 0.0);
    case PayoffKind::down_and_in_put: {
      const double low = *std::min_element(spot + first, spot + n_dates);
      const bool active = spec.barrier_event == BarrierEvent::breached ? low <= spec.barrier : low >= spec.barrier;
      return active ? std::max(strike - spot[n_dates - 1], 0.0) : 0.0;
    }
  }
  return 0.0;
}

}  // namespace

std::vector<PriceEstimate> price_mc(const PathMatrix& paths, const std::vector<OptionSpec>& specs) {
  for (const auto& spec : specs) check_grid(paths, spec);
  const std::size_t d = paths.n_dates();
  std::vector<double> sum(specs.size(), 0.0), sum_sq(specs.size(), 0.0);
  std::vector<double> spot(d);
  for (std::size_t k = 0; k < paths.n_paths; ++k) {
    for (std::size_t i = 0; i < d; ++i) spot[i] = std::exp(paths(k, i));
    for (std::size_t o = 0; o < specs.size(); ++o) {
      const double v = payoff(specs[o], spot.data(), d);
      sum[o] += v;
      sum_sq[o] += v * v;
    }
  }
  const auto n = static_cast<double>(paths.n_paths);
  std::vector<PriceEstimate> out(specs.size());
  for (std::size_t o = 0; o < specs.size(); ++o) {
    const double mean = sum[o] / n;
    const double var = n > 1 ? std::max(sum_sq[o] / n - mean * mean, 0.0) * n / (n - 1) : 0.0;
    out[o] = {mean, std::sqrt(var / n)};
  }
  return out;
}

PriceEstimate price_mc(const PathMatrix& paths, const OptionSpec& spec) { return price_mc(paths, std::vector{spec})[0]; }

MetricsReport metrics(const std::vector<double>& mc, const std::vector<double>& analytic,
                      const std::vector<double>& sds) {
  if (mc.empty() || mc.size() != analytic.size() || mc.size() != sds.size()) {
    throw ConfigError("metrics: inputs must have equal non-zero length");
  }
  MetricsReport r;
  double sq = 0.0, pct = 0.0, sd = 0.0;
  std::size_t pct_count = 0;
  for (std::size_t i = 0; i < mc.size(); ++i) {
    const double err = std::fabs(mc[i] - analytic[i]);
    r.max_bp = std::max(r.max_bp, err / kBasisPoint);
    sq += err * err;
    sd += sds[i];
    if (analytic[i] != 0.0) {
      pct += err / std::fabs(analytic[i]);
      ++pct_count;
    } else {
      ++r.mape_excluded;
    }
  }
  if (r.mape_excluded > 0) {
    std::cerr << "metrics: " << r.mape_excluded << " option(s) with zero analytic price excluded from MAPE\n";
  }
  const auto n = static_cast<double>(mc.size());
  r.rmse_bp = std::sqrt(sq / n) / kBasisPoint;
  r.mape_pct = pct_count ? 100.0 * pct / static_cast<double>(pct_count) : 0.0;
  r.sd_bp = sd / n / kBasisPoint;
  return r;
}

std::string to_string(PayoffKind kind) {
  switch (kind) {
    case PayoffKind::european_call: return "european_call";
    case PayoffKind::asian_call: return "asian_call";
    case PayoffKind::lookback_put: return "lookback_put";
    case PayoffKind::down_and_in_put: return "down_and_in_put";
  }
  return "unknown";
}

PayoffKind payoff_kind_from_string(const std::string& name) {
  for (auto k : {PayoffKind::european_call, PayoffKind::asian_call, PayoffKind::lookback_put,
                 PayoffKind::down_and_in_put}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown payoff kind '" + name + "'");
}

}  // namespace addmc
