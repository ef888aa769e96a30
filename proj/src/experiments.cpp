#include "addmc/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "addmc/csv.hpp"
#include "addmc/error_bounds.hpp"
#include "addmc/errors.hpp"
#include "addmc/jump_ga_benchmark.hpp"
#include "addmc/rng.hpp"

namespace addmc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int get_int(const KeyValues& kv, const std::string& key, int fallback) {
  const double v = get_double(kv, key, fallback);
  if (v != std::floor(v) || std::fabs(v) > 1e9) throw ConfigError("config key '" + key + "' must be an integer");
  return static_cast<int>(v);
}

PathMatrix terminal_paths(const std::vector<double>& values, double t) {
  PathMatrix p;
  p.n_paths = values.size();
  p.times = {0.0, t};
  p.values.assign(2 * values.size(), 0.0);
  for (std::size_t k = 0; k < values.size(); ++k) p.values[2 * k + 1] = values[k];
  return p;
}

std::vector<OptionSpec> call_specs(const std::vector<double>& moneyness, double t) {
  std::vector<OptionSpec> specs;
  for (const double x : moneyness) {
    OptionSpec o;
    o.moneyness = x;
    o.maturity = t;
    specs.push_back(o);
  }
  return specs;
}

// Standard normal CDF sampled on K + 1 points of [-5, 5].
TruncatedCdf gaussian_cdf(std::size_t K) {
  TruncatedCdf tc;
  tc.gamma = 10.0 / static_cast<double>(K);
  for (std::size_t j = 0; j <= K; ++j) {
    const double x = -5.0 + tc.gamma * static_cast<double>(j);
    tc.x.push_back(x);
    tc.p.push_back(0.5 * std::erfc(-x / std::sqrt(2.0)));
  }
  return tc;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::lewis_spline: return "lewis_spline";
    case Method::lewis_linear: return "lewis_linear";
    case Method::ga: return "ga";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  for (auto m : {Method::lewis_spline, Method::lewis_linear, Method::ga}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("method must be one of lewis_spline, lewis_linear, ga (got '" + name + "')");
}

void ExperimentConfig::validate() const {
  params.validate();
  if (M < kMinGridExponent || M > kMaxGridExponent) {
    throw ConfigError("M must lie in [" + std::to_string(kMinGridExponent) + ", " +
                      std::to_string(kMaxGridExponent) + "]");
  }
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (n_sim < 2) throw ConfigError("n_sim must be at least 2");
  if (n_ret < 2) throw ConfigError("n_ret must be at least 2");
  if (!(maturity > 0.0) || !std::isfinite(maturity)) throw ConfigError("maturity must be positive");
  if (monitoring < 1) throw ConfigError("monitoring must be at least 1");
  if (!(barrier >= 0.0 && barrier < 1.0)) throw ConfigError("barrier must lie in [0, 1)");
}

ExperimentConfig experiment_config_from(const KeyValues& kv, ExperimentConfig base) {
  static const std::set<std::string> known{"alpha",   "beta",  "delta",    "k_bar",    "eta_bar",    "sigma_bar",
                                           "method",  "M",     "epsilon",  "n_sim",    "n_ret",      "seed",
                                           "maturity", "monitoring", "barrier", "threads"};
  for (const auto& [key, value] : kv) {
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  ExperimentConfig c = base;
  AtsParams& p = c.params;
  p.alpha = get_double(kv, "alpha", p.alpha);
  p.beta = get_double(kv, "beta", p.beta);
  p.delta = get_double(kv, "delta", p.delta);
  p.k_bar = get_double(kv, "k_bar", p.k_bar);
  p.eta_bar = get_double(kv, "eta_bar", p.eta_bar);
  p.sigma_bar = get_double(kv, "sigma_bar", p.sigma_bar);
  if (auto it = kv.find("method"); it != kv.end()) c.method = method_from_string(it->second);
  c.M = get_int(kv, "M", c.M);
  c.epsilon = get_double(kv, "epsilon", c.epsilon);
  c.n_sim = static_cast<std::size_t>(get_double(kv, "n_sim", static_cast<double>(c.n_sim)));
  c.n_ret = get_int(kv, "n_ret", c.n_ret);
  c.seed = static_cast<std::uint64_t>(get_double(kv, "seed", static_cast<double>(c.seed)));
  c.maturity = get_double(kv, "maturity", c.maturity);
  c.monitoring = get_int(kv, "monitoring", c.monitoring);
  c.barrier = get_double(kv, "barrier", c.barrier);
  c.threads = static_cast<unsigned>(get_int(kv, "threads", static_cast<int>(c.threads)));
  c.validate();
  return c;
}

std::vector<double> simulate_terminal(const AdditiveModel& model, const ExperimentConfig& c) {
  if (c.method == Method::ga) {
    return GaIncrementSampler(c.params, 0.0, c.maturity, c.epsilon, c.n_ret).sample(c.n_sim, c.seed, 0, c.threads);
  }
  const auto kind = c.method == Method::lewis_spline ? InterpolationKind::spline : InterpolationKind::linear;
  const CdfGrid grid = build_cdf_grid(model, 0.0, c.maturity, c.M);
  return sample_increments(build_inverse(truncate_grid(grid), kind), c.n_sim, c.seed, 0, c.threads);
}

std::vector<double> analytic_european_grid(const AdditiveModel& model, double t) {
  std::vector<double> out;
  for (const double x : moneyness_grid(t)) out.push_back(european_call_analytic(model, x, t));
  return out;
}

EuropeanRun run_european(const ExperimentConfig& c, const std::vector<double>& analytic) {
  c.validate();
  const AtsModel model(c.params);
  EuropeanRun run;
  run.moneyness = moneyness_grid(c.maturity);
  run.analytic = analytic;
  const auto start = Clock::now();
  const std::vector<double> f = simulate_terminal(model, c);
  run.seconds = seconds_since(start);
  run.mc = price_mc(terminal_paths(f, c.maturity), call_specs(run.moneyness, c.maturity));
  std::vector<double> prices, sds;
  for (const auto& e : run.mc) {
    prices.push_back(e.price);
    sds.push_back(e.sd);
  }
  run.metrics = metrics(prices, run.analytic, sds);
  return run;
}

EuropeanRun run_european(const ExperimentConfig& c) {
  return run_european(c, analytic_european_grid(AtsModel(c.params), c.maturity));
}

InversionTiming time_inversion(std::size_t K, std::size_t n_sim, int repetitions) {
  const TruncatedCdf tc = gaussian_cdf(K);
  std::vector<double> search, linear, spline;
  volatile double sink = 0.0;
  for (int r = 0; r < repetitions; ++r) {
    const InverseInterpolant probe = build_linear_inverse(tc);
    auto start = Clock::now();
    CounterRng rng(StreamKey{1, 0, 0});
    std::size_t acc = 0;
    for (std::size_t k = 0; k < n_sim; ++k) acc += probe.locate(rng.uniform());
    search.push_back(1e3 * seconds_since(start));
    sink = sink + static_cast<double>(acc);

    start = Clock::now();
    sink = sink + sample_increments(build_linear_inverse(tc), n_sim, 1, 0, 1).back();
    linear.push_back(1e3 * seconds_since(start));

    start = Clock::now();
    sink = sink + sample_increments(build_spline_inverse(tc), n_sim, 1, 0, 1).back();
    spline.push_back(1e3 * seconds_since(start));
  }
  return {median(search), median(linear), median(spline)};
}

std::vector<ExoticRow> price_exotics(const ExperimentConfig& c) {
  c.validate();
  const AtsModel model(c.params);
  SamplerSettings settings;
  settings.M = c.M;
  settings.kind = c.method == Method::lewis_linear ? InterpolationKind::linear : InterpolationKind::spline;
  settings.seed = c.seed;
  settings.threads = c.threads;
  if (c.method == Method::ga) throw ConfigError("method ga supports European pricing only");
  const PathMatrix paths = simulate_paths(model, monitoring_times(c.maturity, c.monitoring), c.n_sim, settings);

  std::vector<OptionSpec> specs;
  for (const double label : kExoticRowLabels) {
    for (auto kind : {PayoffKind::asian_call, PayoffKind::lookback_put, PayoffKind::down_and_in_put}) {
      OptionSpec o;
      o.kind = kind;
      o.moneyness = -label;
      o.maturity = c.maturity;
      o.monitoring = c.monitoring;
      o.barrier = c.barrier;
      specs.push_back(o);
    }
  }
  const std::vector<PriceEstimate> est = price_mc(paths, specs);
  std::vector<ExoticRow> rows;
  for (std::size_t i = 0; i < kExoticRowLabels.size(); ++i) {
    rows.push_back({kExoticRowLabels[i], est[3 * i], est[3 * i + 1], est[3 * i + 2]});
  }
  return rows;
}

void cmd_table1(const ExperimentConfig& c, std::ostream& out) {
  c.validate();
  constexpr std::size_t kGrid = 10000;
  const std::size_t n = std::min<std::size_t>(c.n_sim, 100000);
  const InversionTiming timing = time_inversion(kGrid, n);
  CsvWriter csv(out, {"step", "K", "n_sim", "median_ms"});
  const auto k = static_cast<long long>(kGrid);
  const auto ns = static_cast<long long>(n);
  csv.row({std::string("search"), k, ns, timing.search_ms});
  csv.row({std::string("linear"), k, ns, timing.linear_ms});
  csv.row({std::string("spline"), k, ns, timing.spline_ms});
}

void cmd_table3(const ExperimentConfig& c, std::ostream& out) {
  c.validate();
  CsvWriter csv(out, {"alpha", "M", "gamma", "max_bp", "rmse_bp", "mape_pct", "sd_bp", "seconds"});
  const AtsModel model(c.params);
  const std::vector<double> analytic = analytic_european_grid(model, c.maturity);
  const DecayBound decay = model.decay_bound(0.0, c.maturity);
  for (int M = 7; M <= 13; ++M) {
    ExperimentConfig run = c;
    run.M = M;
    const EuropeanRun r = run_european(run, analytic);
    const double gamma = make_fft_config(M, decay, model.inversion_strip(0.0, c.maturity)).gamma;
    csv.row({c.params.alpha, static_cast<long long>(M), gamma, r.metrics.max_bp, r.metrics.rmse_bp, r.metrics.mape_pct,
             r.metrics.sd_bp, r.seconds});
  }
}

void cmd_price(const ExperimentConfig& c, std::ostream& out) {
  CsvWriter csv(out, {"kind", "x", "t", "price", "sd", "analytic", "error_bp"});
  for (const ExoticRow& row : price_exotics(c)) {
    const std::pair<PayoffKind, PriceEstimate> cells[] = {{PayoffKind::asian_call, row.asian},
                                                          {PayoffKind::lookback_put, row.lookback},
                                                          {PayoffKind::down_and_in_put, row.down_and_in}};
    for (const auto& [kind, est] : cells) {
      csv.row({to_string(kind), 0.0 - row.label, c.maturity, est.price, est.sd, std::string(), std::string()});
    }
  }
}

void write_figure1(const ExperimentConfig& c, std::ostream& out) {
  const AtsModel model(c.params);
  CsvWriter csv(out, {"t", "x", "x_scaled", "density"});
  for (const double t : {1.0 / 252.0, 1.0}) {
    const TruncatedCdf tc = truncate_grid(build_cdf_grid(model, 0.0, t, c.M));
    std::vector<double> density(tc.x.size(), 0.0);
    for (std::size_t j = 1; j + 1 < tc.x.size(); ++j) density[j] = (tc.p[j + 1] - tc.p[j - 1]) / (2.0 * tc.gamma);
    const double peak = *std::max_element(density.begin(), density.end());
    for (std::size_t j = 1; j + 1 < tc.x.size(); ++j) {
      csv.row({t, tc.x[j], tc.x[j] / std::sqrt(t), density[j] / peak});
    }
  }
}

void write_figure2(const ExperimentConfig& c, std::ostream& out) {
  const AtsModel model(c.params);
  const double t = c.maturity;
  const DecayBound decay = model.decay_bound(0.0, t);
  const AnalyticityStrip strip = model.inversion_strip(0.0, t);
  CsvWriter csv(out, {"M", "truncation_bound", "interpolation_bound", "cdf_bound"});
  for (int M = 7; M <= 13; ++M) {
    const CdfGrid grid = build_cdf_grid(model, 0.0, t, M, decay);
    const TruncatedCdf tc = truncate_grid(grid);
    BiasReport worst;
    for (const double x : moneyness_grid(t)) {
      const BiasReport b =
          bias_bound(european_call_envelope(x, tc.x.front(), tc.x.back(), strip), tc, grid.config, model, 0.0, t, decay);
      worst.cdf_component = std::max(worst.cdf_component, b.cdf_component);
      worst.truncation_component = std::max(worst.truncation_component, b.truncation_component);
      worst.interpolation_component = std::max(worst.interpolation_component, b.interpolation_component);
    }
    csv.row({static_cast<long long>(M), worst.truncation_component, worst.interpolation_component, worst.cdf_component});
  }
}

void write_convergence(const ExperimentConfig& c, double maturity, std::ostream& out) {
  const AtsModel model(c.params);
  const std::vector<double> analytic = analytic_european_grid(model, maturity);
  const DecayBound decay = model.decay_bound(0.0, maturity);
  CsvWriter csv(out, {"M", "gamma", "linear_max_bp", "spline_max_bp", "sd_bp"});
  for (int M = 7; M <= 13; ++M) {
    ExperimentConfig run = c;
    run.M = M;
    run.maturity = maturity;
    run.method = Method::lewis_linear;
    const EuropeanRun linear = run_european(run, analytic);
    run.method = Method::lewis_spline;
    const EuropeanRun spline = run_european(run, analytic);
    const double gamma = make_fft_config(M, decay, model.inversion_strip(0.0, maturity)).gamma;
    csv.row({static_cast<long long>(M), gamma, linear.metrics.max_bp, spline.metrics.max_bp, spline.metrics.sd_bp});
  }
}

void write_figure5(const ExperimentConfig& c, std::ostream& out) {
  const AtsModel model(c.params);
  CsvWriter csv(out, {"t", "M", "epsilon", "lewis_seconds", "ga_seconds", "lewis_max_bp", "ga_max_bp", "ratio"});
  const double horizons[] = {1.0 / 252.0, 1.0 / 52.0, 1.0 / 12.0, 0.25, 0.5, 1.0, 2.0};
  const double ladder[] = {0.3, 0.1, 0.03, 0.01, 0.003};
  for (const double t : horizons) {
    const std::vector<double> analytic = analytic_european_grid(model, t);
    ExperimentConfig run = c;
    run.maturity = t;
    run.method = Method::lewis_spline;
    std::vector<double> lewis_times;
    EuropeanRun lewis;
    for (int r = 0; r < 5; ++r) {
      lewis = run_european(run, analytic);
      lewis_times.push_back(lewis.seconds);
    }
    // coarsest threshold whose error is within max(1 bp, 4 SD)
    run.method = Method::ga;
    EuropeanRun ga;
    for (const double eps : ladder) {
      run.epsilon = eps;
      ga = run_european(run, analytic);
      if (ga.metrics.max_bp <= std::max(1.0, 4.0 * ga.metrics.sd_bp)) break;
    }
    std::vector<double> ga_times{ga.seconds};
    for (int r = 1; r < 5; ++r) ga_times.push_back(run_european(run, analytic).seconds);
    const double lt = median(lewis_times);
    const double gt = median(ga_times);
    csv.row({t, static_cast<long long>(c.M), run.epsilon, lt, gt, lewis.metrics.max_bp, ga.metrics.max_bp, gt / lt});
  }
}

void cmd_figures(const ExperimentConfig& c, const std::string& directory) {
  c.validate();
  std::filesystem::create_directories(directory);
  auto open = [&](const std::string& name) {
    std::ofstream f(std::filesystem::path(directory) / name);
    if (!f) throw ConfigError("cannot write " + name + " in " + directory);
    return f;
  };
  {
    auto f = open("figure1.csv");
    write_figure1(c, f);
  }
  {
    auto f = open("figure2.csv");
    write_figure2(c, f);
  }
  {
    auto f = open("figure3.csv");
    write_convergence(c, 1.0 / 52.0, f);
  }
  {
    auto f = open("figure4.csv");
    write_convergence(c, 1.0 / 12.0, f);
  }
  {
    auto f = open("figure5.csv");
    write_figure5(c, f);
  }
}

}  // namespace addmc
