#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <vector>

#include "addmc/additive_models.hpp"
#include "addmc/lewis_fft_cdf.hpp"
#include "addmc/rng.hpp"

namespace addmc {

/// Half-width of the truncation window in units of sqrt(t - s).
inline constexpr double kDefaultTruncationWidth = 5.0;

/// Strictly increasing CDF values inside (0, 1) on an equally spaced window.
struct TruncatedCdf {
  std::vector<double> x;
  std::vector<double> p;
  double gamma = 0.0;

  std::size_t intervals() const { return x.empty() ? 0 : x.size() - 1; }
};

enum class InterpolationKind { linear, spline };

/// x as a piecewise polynomial of p. Interval j covers [p_j, p_{j+1}] and
/// stores c0..c3 of x = c0 + c1 d + c2 d^2 + c3 d^3 with d = U - p_j.
class InverseInterpolant {
 public:
  InverseInterpolant(InterpolationKind kind, std::vector<double> p, std::vector<double> x,
                     std::vector<double> coefficients);

  InterpolationKind kind() const { return kind_; }
  const std::vector<double>& p() const { return p_; }
  const std::vector<double>& x() const { return x_; }

  /// Interval j with p_j <= U < p_{j+1}; U is clamped into [p_0, p_K].
  std::size_t locate(double u) const;
  double evaluate(double u) const;
  double evaluate_in(std::size_t interval, double u) const;

 private:
  InterpolationKind kind_;
  std::vector<double> p_;
  std::vector<double> x_;
  std::vector<double> coefficients_;  // 4 per interval
};

/// Symmetric window at the grid points nearest +-D sqrt(t - s), then shrunk
/// to the monotone run around x = 0. Throws ConfigError if nothing is left.
TruncatedCdf truncate_grid(const CdfGrid& grid, double width = kDefaultTruncationWidth);

InverseInterpolant build_linear_inverse(const TruncatedCdf& tc);

/// Natural cubic spline of x over the non-uniform knots p_j (tridiagonal solve).
InverseInterpolant build_spline_inverse(const TruncatedCdf& tc);

InverseInterpolant build_inverse(const TruncatedCdf& tc, InterpolationKind kind);

/// Dense scan: intervals whose interpolant leaves [x_j, x_{j+1}] or decreases.
std::size_t count_monotonicity_violations(const InverseInterpolant& inv, int points_per_interval = 16);

/// n_sim draws; batch b uses StreamKey{seed, increment, b}.
std::vector<double> sample_increments(const InverseInterpolant& inv, std::size_t n_sim, std::uint64_t seed,
                                      std::uint64_t increment = 0, unsigned threads = 0);

/// n_paths x n_dates values, row-major; column 0 is f_{t_0} = 0.
struct PathMatrix {
  std::size_t n_paths = 0;
  std::vector<double> times;
  std::vector<double> values;

  std::size_t n_dates() const { return times.size(); }
  double operator()(std::size_t path, std::size_t date) const { return values[path * times.size() + date]; }
  double& operator()(std::size_t path, std::size_t date) { return values[path * times.size() + date]; }
};

struct SamplerSettings {
  int M = 13;
  InterpolationKind kind = InterpolationKind::spline;
  double truncation_width = kDefaultTruncationWidth;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

/// Paths on 0 = t_0 < t_1 < ... < t_n: one CDF grid and interpolant per interval.
PathMatrix simulate_paths(const AdditiveModel& model, const std::vector<double>& times, std::size_t n_sim,
                          const SamplerSettings& settings);

/// One row per path, one column per monitoring date.
void write_csv(std::ostream& out, const PathMatrix& paths);

}  // namespace addmc
