#include "addmc/lewis_fft_cdf.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "addmc/csv.hpp"
#include "addmc/errors.hpp"
#include "addmc/quadrature.hpp"

namespace addmc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(p);
  }
};

// In-place forward transform, X_j = sum_l x_l e^{-2 pi i j l / N}.
void forward_fft(std::vector<cplx>& data) {
  auto* buffer = reinterpret_cast<fftw_complex*>(data.data());
  std::unique_ptr<fftw_plan_s, PlanDeleter> plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan.reset(fftw_plan_dft_1d(static_cast<int>(data.size()), buffer, buffer, FFTW_FORWARD,
                                FFTW_ESTIMATE | FFTW_UNALIGNED));
  }
  if (!plan) throw NumericalError("FFTW could not create a plan");
  fftw_execute(plan.get());
}

void require_grid_exponent(int M) {
  if (M < kMinGridExponent || M > kMaxGridExponent) {
    throw ConfigError("M must lie in [" + std::to_string(kMinGridExponent) + ", " +
                      std::to_string(kMaxGridExponent) + "]");
  }
}

}  // namespace

double optimal_shift(const AnalyticityStrip& strip) { return 0.5 * (strip.p_plus + 1.0); }

double step_size(std::size_t N, const DecayBound& decay, const AnalyticityStrip& strip) {
  const double w = decay.exponent;
  return std::pow(kPi * (strip.p_plus + 1.0) / (decay.rate * std::pow(static_cast<double>(N), w)),
                  1.0 / (w + 1.0));
}

FftConfig make_fft_config(int M, const DecayBound& decay, const AnalyticityStrip& strip) {
  require_grid_exponent(M);
  FftConfig c;
  c.M = M;
  c.N = std::size_t{1} << M;
  c.h = step_size(c.N, decay, strip);
  c.gamma = 2.0 * kPi / (static_cast<double>(c.N) * c.h);
  c.shift = optimal_shift(strip);
  return c;
}

CdfGrid build_cdf_grid(const AdditiveModel& model, double s, double t, int M) {
  require_grid_exponent(M);
  return build_cdf_grid(model, s, t, M, model.decay_bound(s, t));
}

CdfGrid build_cdf_grid(const AdditiveModel& model, double s, double t, int M, const DecayBound& decay) {
  const AnalyticityStrip strip = model.inversion_strip(s, t);
  CdfGrid grid;
  grid.s = s;
  grid.t = t;
  grid.config = make_fft_config(M, decay, strip);
  const std::size_t n = grid.config.N;
  const double h = grid.config.h;
  const double a = grid.config.shift;

  // (l + 1/2) h x_j = 2 pi l j / N - pi l + pi j / N - pi / 2, so the
  // half-integer nodes and the centred grid cost a (-1)^l pre-phase and an
  // i e^{-i pi j / N} post-phase around a standard FFT.
  std::vector<cplx> data(n);
  for (std::size_t l = 0; l < n; ++l) {
    const double u = (static_cast<double>(l) + 0.5) * h;
    const cplx phi = std::exp(model.log_increment_char_fn(cplx(u, -a), s, t));
    const cplx term = phi / cplx(a, u);
    data[l] = (l % 2 == 0) ? term : -term;
  }
  forward_fft(data);

  grid.x.resize(n);
  grid.p_hat.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double xj = (static_cast<double>(j) - 0.5 * static_cast<double>(n)) * grid.config.gamma;
    const double phase = -kPi * static_cast<double>(j) / static_cast<double>(n);
    const cplx sum = kI * std::polar(1.0, phase) * data[j] * h;
    grid.x[j] = xj;
    grid.p_hat[j] = 1.0 - std::exp(-a * xj) / kPi * sum.real();
  }
  return grid;
}

double cdf_reference(const AdditiveModel& model, double s, double t, double x, double a) {
  const AnalyticityStrip strip = model.strip(t);
  if (!(a > 0.0 && a < strip.p_plus + 1.0)) {
    throw DomainError("cdf_reference: shift must lie in (0, p_plus + 1)");
  }
  auto integrand = [&](double u) {
    const cplx phi = std::exp(model.log_increment_char_fn(cplx(u, -a), s, t));
    return (std::polar(1.0, -u * x) * phi / cplx(a, u)).real();
  };
  // Truncate where the integrand envelope, scaled to CDF units, is below 1e-17.
  const double scale = std::exp(-a * x) / kPi;
  double upper = 1.0;
  auto envelope = [&](double u) {
    return scale * std::abs(std::exp(model.log_increment_char_fn(cplx(u, -a), s, t))) / u;
  };
  while (envelope(upper) > 1e-17 || envelope(1.5 * upper) > 1e-17) {
    upper *= 1.5;
    if (upper > 1e9) throw NumericalError("cdf_reference: characteristic function does not decay");
  }
  const int panels = 16 + static_cast<int>(std::ceil(upper * std::fabs(x) / kPi));
  // below ~1e-13 the cancellation in the sum dominates any requested accuracy
  const double abs_tol = std::max(1e-12 / scale, 1e-13);
  const QuadratureResult r = integrate(integrand, 0.0, upper, abs_tol, panels);
  return 1.0 - scale * r.value;
}

void write_csv(std::ostream& out, const CdfGrid& grid) {
  CsvWriter csv(out, {"x", "p_hat"});
  for (std::size_t j = 0; j < grid.x.size(); ++j) csv.row({grid.x[j], grid.p_hat[j]});
}

}  // namespace addmc
