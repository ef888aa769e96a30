#include "addmc/inverse_cdf_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "addmc/csv.hpp"
#include "addmc/errors.hpp"
#include "addmc/parallel.hpp"

namespace addmc {

InverseInterpolant::InverseInterpolant(InterpolationKind kind, std::vector<double> p, std::vector<double> x,
                                       std::vector<double> coefficients)
    : kind_(kind), p_(std::move(p)), x_(std::move(x)), coefficients_(std::move(coefficients)) {
  if (p_.size() < 2 || p_.size() != x_.size() || coefficients_.size() != 4 * (p_.size() - 1)) {
    throw ConfigError("inverse interpolant: inconsistent knot and coefficient sizes");
  }
}

std::size_t InverseInterpolant::locate(double u) const {
  const auto it = std::upper_bound(p_.begin(), p_.end(), u);
  if (it == p_.begin()) return 0;
  const auto j = static_cast<std::size_t>(it - p_.begin()) - 1;
  return std::min(j, p_.size() - 2);
}

double InverseInterpolant::evaluate_in(std::size_t j, double u) const {
  const double d = std::clamp(u, p_.front(), p_.back()) - p_[j];
  const double* c = &coefficients_[4 * j];
  return c[0] + d * (c[1] + d * (c[2] + d * c[3]));
}

double InverseInterpolant::evaluate(double u) const { return evaluate_in(locate(u), u); }

TruncatedCdf truncate_grid(const CdfGrid& grid, double width) {
  if (!(width > 0.0)) throw ConfigError("truncation width must be positive");
  const auto n = static_cast<long>(grid.x.size());
  const long centre = n / 2;
  const double gamma = grid.config.gamma;
  long reach = std::lround(width * std::sqrt(grid.t - grid.s) / gamma);
  // keep the window symmetric when the grid is narrower than requested
  reach = std::min({reach, centre, n - 1 - centre});

  const auto& p = grid.p_hat;
  if (!(p[centre] > 0.0 && p[centre] < 1.0)) {
    throw ConfigError("truncate_grid: CDF at x = 0 is outside (0, 1); increase M");
  }
  long hi = centre;
  while (hi + 1 <= centre + reach && p[hi + 1] > p[hi] && p[hi + 1] < 1.0) ++hi;
  long lo = centre;
  while (lo - 1 >= centre - reach && p[lo - 1] < p[lo] && p[lo - 1] > 0.0) --lo;
  if (hi - lo < 1) throw ConfigError("truncate_grid: empty monotone window; increase M");

  TruncatedCdf tc;
  tc.gamma = gamma;
  tc.x.assign(grid.x.begin() + lo, grid.x.begin() + hi + 1);
  tc.p.assign(p.begin() + lo, p.begin() + hi + 1);
  return tc;
}

namespace {

void require_increasing(const TruncatedCdf& tc) {
  if (tc.p.size() < 2 || tc.p.size() != tc.x.size()) throw ConfigError("truncated CDF needs >= 2 knots");
  for (std::size_t j = 1; j < tc.p.size(); ++j) {
    if (!(tc.p[j] > tc.p[j - 1])) {
      throw ConfigError("degenerate interval: CDF knots not strictly increasing at " + std::to_string(j));
    }
  }
}

}  // namespace

InverseInterpolant build_linear_inverse(const TruncatedCdf& tc) {
  require_increasing(tc);
  const std::size_t k = tc.intervals();
  std::vector<double> c(4 * k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    c[4 * j] = tc.x[j];
    c[4 * j + 1] = (tc.x[j + 1] - tc.x[j]) / (tc.p[j + 1] - tc.p[j]);
  }
  return {InterpolationKind::linear, tc.p, tc.x, std::move(c)};
}

InverseInterpolant build_spline_inverse(const TruncatedCdf& tc) {
  require_increasing(tc);
  const std::size_t k = tc.intervals();
  if (k < 3) throw ConfigError("spline inverse needs at least 4 knots");
  const auto& p = tc.p;
  const auto& x = tc.x;
  std::vector<double> h(k), slope(k);
  for (std::size_t j = 0; j < k; ++j) {
    h[j] = p[j + 1] - p[j];
    slope[j] = (x[j + 1] - x[j]) / h[j];
  }
  // Second derivatives m_1..m_{K-1}; natural ends m_0 = m_K = 0. Thomas algorithm.
  std::vector<double> m(k + 1, 0.0);
  std::vector<double> diag(k + 1), rhs(k + 1);
  for (std::size_t i = 1; i < k; ++i) {
    diag[i] = 2.0 * (h[i - 1] + h[i]);
    rhs[i] = 6.0 * (slope[i] - slope[i - 1]);
  }
  for (std::size_t i = 2; i < k; ++i) {
    const double w = h[i - 1] / diag[i - 1];
    diag[i] -= w * h[i - 1];
    rhs[i] -= w * rhs[i - 1];
    if (diag[i] == 0.0 || !std::isfinite(diag[i])) throw ConfigError("degenerate interval: singular spline system");
  }
  m[k - 1] = rhs[k - 1] / diag[k - 1];
  for (std::size_t i = k - 1; i-- > 1;) m[i] = (rhs[i] - h[i] * m[i + 1]) / diag[i];

  std::vector<double> c(4 * k);
  for (std::size_t j = 0; j < k; ++j) {
    c[4 * j] = x[j];
    c[4 * j + 1] = slope[j] - h[j] * (2.0 * m[j] + m[j + 1]) / 6.0;
    c[4 * j + 2] = 0.5 * m[j];
    c[4 * j + 3] = (m[j + 1] - m[j]) / (6.0 * h[j]);
  }
  return {InterpolationKind::spline, tc.p, tc.x, std::move(c)};
}

InverseInterpolant build_inverse(const TruncatedCdf& tc, InterpolationKind kind) {
  return kind == InterpolationKind::spline ? build_spline_inverse(tc) : build_linear_inverse(tc);
}

std::size_t count_monotonicity_violations(const InverseInterpolant& inv, int points_per_interval) {
  const auto& p = inv.p();
  const auto& x = inv.x();
  std::size_t bad = 0;
  for (std::size_t j = 0; j + 1 < p.size(); ++j) {
    const double tol = 1e-12 * (1.0 + std::fabs(x[j]) + std::fabs(x[j + 1]));
    double prev = x[j];
    bool ok = true;
    for (int i = 1; i <= points_per_interval; ++i) {
      const double u = p[j] + (p[j + 1] - p[j]) * i / (points_per_interval + 1.0);
      const double v = inv.evaluate_in(j, u);
      if (v < prev - tol || v < x[j] - tol || v > x[j + 1] + tol) ok = false;
      prev = v;
    }
    if (!ok) ++bad;
  }
  return bad;
}

std::vector<double> sample_increments(const InverseInterpolant& inv, std::size_t n_sim, std::uint64_t seed,
                                      std::uint64_t increment, unsigned threads) {
  if (n_sim == 0) throw ConfigError("n_sim must be at least 1");
  std::vector<double> out(n_sim);
  const std::size_t batches = (n_sim + kBatchSize - 1) / kBatchSize;
  parallel_for_batches(
      batches,
      [&](std::size_t b) {
        CounterRng rng({seed, increment, b});
        const std::size_t end = std::min(n_sim, (b + 1) * kBatchSize);
        for (std::size_t i = b * kBatchSize; i < end; ++i) out[i] = inv.evaluate(rng.uniform());
      },
      threads);
  return out;
}

PathMatrix simulate_paths(const AdditiveModel& model, const std::vector<double>& times, std::size_t n_sim,
                          const SamplerSettings& settings) {
  if (times.size() < 2 || times.front() != 0.0) throw ConfigError("monitoring times must start at t_0 = 0");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw ConfigError("monitoring times must be strictly increasing");
  }
  PathMatrix paths;
  paths.n_paths = n_sim;
  paths.times = times;
  paths.values.assign(n_sim * times.size(), 0.0);
  for (std::size_t i = 1; i < times.size(); ++i) {
    const CdfGrid grid = build_cdf_grid(model, times[i - 1], times[i], settings.M);
    const InverseInterpolant inv = build_inverse(truncate_grid(grid, settings.truncation_width), settings.kind);
    const std::vector<double> dx = sample_increments(inv, n_sim, settings.seed, i - 1, settings.threads);
    for (std::size_t k = 0; k < n_sim; ++k) paths(k, i) = paths(k, i - 1) + dx[k];
  }
  return paths;
}

void write_csv(std::ostream& out, const PathMatrix& paths) {
  std::vector<std::string> header;
  for (const double t : paths.times) header.push_back("t=" + format_number(t));
  CsvWriter csv(out, header);
  std::vector<CsvCell> row(paths.n_dates());
  for (std::size_t k = 0; k < paths.n_paths; ++k) {
    for (std::size_t i = 0; i < paths.n_dates(); ++i) row[i] = paths(k, i);
    csv.row(row);
  }
}

}  // namespace addmc
