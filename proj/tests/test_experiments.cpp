#include <doctest.h>

#include <algorithm>
#include <sstream>
#include <string>

#include "addmc/errors.hpp"
#include "addmc/experiments.hpp"

using namespace addmc;

namespace {

KeyValues parse(const std::string& text) {
  std::istringstream in(text);
  return read_key_values(in);
}

std::string message_of(const ExperimentConfig& c) {
  try {
    c.validate();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char ch : s) n += ch == '\n';
  return n;
}

}  // namespace

TEST_CASE("key = value parsing") {
  const KeyValues kv = parse("# reference run\n\n  alpha = 0.5 \nM=10\nmethod = lewis_linear\n");
  CHECK(kv.size() == 3);
  CHECK(kv.at("alpha") == "0.5");
  CHECK(get_double(kv, "alpha") == 0.5);
  CHECK(get_double(kv, "beta", 2.0) == 2.0);
  CHECK_THROWS_AS(get_double(kv, "beta"), ConfigError);
  CHECK_THROWS_AS(get_double(kv, "method"), ConfigError);
  CHECK_THROWS_AS(parse("alpha 0.5\n"), ConfigError);
  CHECK_THROWS_AS(parse(" = 3\n"), ConfigError);
  CHECK_THROWS_AS(read_key_values_file("/nonexistent/run.cfg"), ConfigError);
}

TEST_CASE("experiment config from key = value text") {
  const ExperimentConfig c =
      experiment_config_from(parse("alpha = 0.5\nM = 10\nmethod = ga\nepsilon = 0.01\nn_sim = 5000\nseed = 9\n"
                                   "maturity = 1\nmonitoring = 4\nbarrier = 0.5\nthreads = 2\nn_ret = 64\n"));
  CHECK(c.params.alpha == 0.5);
  CHECK(c.params.sigma_bar == 0.2);
  CHECK(c.M == 10);
  CHECK(c.method == Method::ga);
  CHECK(c.epsilon == 0.01);
  CHECK(c.n_sim == 5000);
  CHECK(c.seed == 9);
  CHECK(c.maturity == 1.0);
  CHECK(c.monitoring == 4);
  CHECK(c.barrier == 0.5);
  CHECK(c.threads == 2);
  CHECK(c.n_ret == 64);

  ExperimentConfig base;
  base.M = 9;
  CHECK(experiment_config_from(parse("alpha = 0.4\n"), base).M == 9);

  CHECK_THROWS_WITH_AS(experiment_config_from(parse("gamma = 1\n")), "unknown config key 'gamma'", ConfigError);
  CHECK_THROWS_AS(experiment_config_from(parse("M = 10.5\n")), ConfigError);
  CHECK_THROWS_AS(experiment_config_from(parse("M = 3\n")), ConfigError);
  CHECK_THROWS_AS(experiment_config_from(parse("alpha = 1.5\n")), ConfigError);
}

TEST_CASE("validation names the offending field") {
  ExperimentConfig c;
  CHECK(message_of(c).empty());
  c.M = 21;
  CHECK(message_of(c).rfind("M ", 0) == 0);
  c = {};
  c.epsilon = 0.0;
  CHECK(message_of(c).find("epsilon") != std::string::npos);
  c = {};
  c.n_sim = 1;
  CHECK(message_of(c).find("n_sim") != std::string::npos);
  c = {};
  c.n_ret = 1;
  CHECK(message_of(c).find("n_ret") != std::string::npos);
  c = {};
  c.maturity = -1.0;
  CHECK(message_of(c).find("maturity") != std::string::npos);
  c = {};
  c.monitoring = 0;
  CHECK(message_of(c).find("monitoring") != std::string::npos);
  c = {};
  c.barrier = 1.0;
  CHECK(message_of(c).find("barrier") != std::string::npos);
  c = {};
  c.params.sigma_bar = -0.2;
  CHECK(message_of(c).find("sigma_bar") != std::string::npos);
}

TEST_CASE("method names") {
  for (Method m : {Method::lewis_spline, Method::lewis_linear, Method::ga}) CHECK(method_from_string(to_string(m)) == m);
  CHECK_THROWS_AS(method_from_string("euler"), ConfigError);
}

TEST_CASE("terminal simulation is reproducible") {
  ExperimentConfig c;
  c.n_sim = 20'000;
  const AtsModel model(c.params);
  for (Method m : {Method::lewis_spline, Method::lewis_linear, Method::ga}) {
    c.method = m;
    c.threads = 1;
    const std::vector<double> a = simulate_terminal(model, c);
    c.threads = 3;
    CHECK(simulate_terminal(model, c) == a);
    CHECK(a.size() == c.n_sim);
  }
}

TEST_CASE("European run") {
  ExperimentConfig c;
  c.n_sim = 200'000;
  c.M = 11;
  const EuropeanRun r = run_european(c);
  CHECK(r.moneyness.size() == 30);
  CHECK(r.analytic.size() == 30);
  CHECK(r.mc.size() == 30);
  CHECK(r.metrics.max_bp >= r.metrics.rmse_bp);
  CHECK(r.metrics.max_bp <= std::max(1.0, 4.0 * r.metrics.sd_bp));
  CHECK(r.seconds > 0.0);
}

TEST_CASE("exotic prices are deterministic") {
  ExperimentConfig c;
  c.n_sim = 4000;
  c.M = 10;
  c.maturity = 5.0;
  std::ostringstream a, b;
  cmd_price(c, a);
  cmd_price(c, b);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("kind,x,t,price,sd,analytic,error_bp\n", 0) == 0);
  CHECK(count_lines(a.str()) == 1 + 3 * kExoticRowLabels.size());

  const std::vector<ExoticRow> rows = price_exotics(c);
  CHECK(rows.size() == 5);
  CHECK(rows.front().asian.price > rows.back().asian.price);     // strike e^{label}
  CHECK(rows.front().lookback.price < rows.back().lookback.price);
  c.method = Method::ga;
  CHECK_THROWS_AS(price_exotics(c), ConfigError);
}

TEST_CASE("figure CSV layouts") {
  ExperimentConfig c;
  c.n_sim = 2000;
  std::ostringstream f1, f2;
  write_figure1(c, f1);
  CHECK(f1.str().rfind("t,x,x_scaled,density\n", 0) == 0);
  write_figure2(c, f2);
  CHECK(f2.str().rfind("M,truncation_bound,interpolation_bound,cdf_bound\n", 0) == 0);
  CHECK(count_lines(f2.str()) == 8);
}
