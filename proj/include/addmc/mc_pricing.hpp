#pragma once

#include <string>
#include <vector>

#include "addmc/additive_models.hpp"
#include "addmc/inverse_cdf_sampler.hpp"

namespace addmc {

enum class PayoffKind { european_call, asian_call, lookback_put, down_and_in_put };

/// Which barrier event activates the down-and-in put.
enum class BarrierEvent {
  breached,  // 1{min_i e^{f_{t_i}} <= L}, standard knock-in
  survived,  // 1{min_i e^{f_{t_i}} >= L}, as printed in the original payoff display
};

/// Unit spot, zero rates. Strike is e^{-x}.
struct OptionSpec {
  PayoffKind kind = PayoffKind::european_call;
  double moneyness = 0.0;
  double maturity = 1.0;
  int monitoring = 1;  // number of dates after t_0
  double barrier = 0.6;
  BarrierEvent barrier_event = BarrierEvent::breached;
  /// Whether t_0 enters the average and the running minimum; by default only t_1..t_n do.
  bool include_initial_date = false;

  double strike() const;
  void validate() const;
};

struct PriceEstimate {
  double price = 0.0;
  double sd = 0.0;  // standard deviation of the MC mean
};

/// Errors in basis points of notional except MAPE (percent).
struct MetricsReport {
  double max_bp = 0.0;
  double rmse_bp = 0.0;
  double mape_pct = 0.0;
  double sd_bp = 0.0;
  std::size_t mape_excluded = 0;  // options with zero analytic price
};

inline constexpr double kBasisPoint = 1e-4;

/// Lewis call formula on Im(u) = -1/2 by adaptive quadrature.
double european_call_analytic(const AdditiveModel& model, double moneyness, double t);

double black_scholes_call(double moneyness, double t, double sigma);

/// `count` equally spaced points spanning sqrt(t) (-0.2, 0.2).
std::vector<double> moneyness_grid(double t, int count = 30);

/// 0 = t_0 < ... < t_n equally spaced to maturity.
std::vector<double> monitoring_times(double maturity, int n);

PriceEstimate price_mc(const PathMatrix& paths, const OptionSpec& spec);

/// Several options on one shared path matrix; exponentiates each path once.
std::vector<PriceEstimate> price_mc(const PathMatrix& paths, const std::vector<OptionSpec>& specs);

MetricsReport metrics(const std::vector<double>& mc_prices, const std::vector<double>& analytic_prices,
                      const std::vector<double>& sds);

std::string to_string(PayoffKind kind);
PayoffKind payoff_kind_from_string(const std::string& name);

}  // namespace addmc
