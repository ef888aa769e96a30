#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "addmc/additive_models.hpp"
#include "addmc/config.hpp"
#include "addmc/inverse_cdf_sampler.hpp"
#include "addmc/mc_pricing.hpp"

namespace addmc {

enum class Method { lewis_spline, lewis_linear, ga };

std::string to_string(Method m);
Method method_from_string(const std::string& name);

struct ExperimentConfig {
  AtsParams params;
  Method method = Method::lewis_spline;
  int M = 13;
  double epsilon = 0.03;
  std::size_t n_sim = 1'000'000;
  int n_ret = 256;
  std::uint64_t seed = 1;
  double maturity = 1.0 / 12.0;
  int monitoring = 20;
  double barrier = 0.6;
  unsigned threads = 0;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

/// Overrides `base` with the keys present in `kv`; unknown keys are rejected.
ExperimentConfig experiment_config_from(const KeyValues& kv, ExperimentConfig base = {});

/// Simulated increments f_T under the configured method, M and epsilon.
std::vector<double> simulate_terminal(const AdditiveModel& model, const ExperimentConfig& c);

struct EuropeanRun {
  std::vector<double> moneyness;
  std::vector<double> analytic;
  std::vector<PriceEstimate> mc;
  MetricsReport metrics;
  double seconds = 0.0;  // simulation only
};

/// The 30 calls spanning sqrt(T) (-0.2, 0.2), priced against the Lewis formula.
EuropeanRun run_european(const ExperimentConfig& c);
EuropeanRun run_european(const ExperimentConfig& c, const std::vector<double>& analytic);

std::vector<double> analytic_european_grid(const AdditiveModel& model, double t);

/// Linear-vs-spline inversion cost on a K-interval Gaussian CDF.
struct InversionTiming {
  double search_ms = 0.0;
  double linear_ms = 0.0;
  double spline_ms = 0.0;
};

/// Median of `repetitions` single-threaded runs.
InversionTiming time_inversion(std::size_t K, std::size_t n_sim, int repetitions = 5);

/// Exotic price grid: each row label r is priced at strike e^{r}.
inline const std::vector<double> kExoticRowLabels{-0.5, -0.25, 0.0, 0.25, 0.5};

struct ExoticRow {
  double label = 0.0;
  PriceEstimate asian;
  PriceEstimate lookback;
  PriceEstimate down_and_in;
};

std::vector<ExoticRow> price_exotics(const ExperimentConfig& c);

void cmd_table1(const ExperimentConfig& c, std::ostream& out);
void cmd_table3(const ExperimentConfig& c, std::ostream& out);
void cmd_price(const ExperimentConfig& c, std::ostream& out);
/// Writes figure1.csv .. figure5.csv into `directory`.
void cmd_figures(const ExperimentConfig& c, const std::string& directory);

void write_figure1(const ExperimentConfig& c, std::ostream& out);
void write_figure2(const ExperimentConfig& c, std::ostream& out);
void write_convergence(const ExperimentConfig& c, double maturity, std::ostream& out);
void write_figure5(const ExperimentConfig& c, std::ostream& out);

}  // namespace addmc
