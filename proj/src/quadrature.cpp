#include "addmc/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "addmc/csv.hpp"
#include "addmc/errors.hpp"

namespace addmc {

namespace bq = boost::math::quadrature;

namespace {

// Gauss-Kronrod |K - G| estimates are pessimistic for smooth integrands, so
// non-convergence is declared only well above the requested tolerance.
constexpr double kFailureSlack = 1e3;
constexpr unsigned kMaxDepth = 18;

}  // namespace

QuadratureResult integrate(const RealFunction& f, double a, double b, double abs_tol, int panels) {
  if (panels < 1) panels = 1;
  const double width = (b - a) / panels;
  const double panel_tol = abs_tol / panels;
  QuadratureResult out;
  double mass = 0.0;  // int |f|, which sets the rounding floor
  for (int i = 0; i < panels; ++i) {
    const double lo = a + i * width;
    const double hi = (i + 1 == panels) ? b : lo + width;
    double err = 0.0;
    double l1 = 0.0;
    bq::gauss_kronrod<double, 31>::integrate(f, lo, hi, 0, 0.0, &err, &l1);
    const double rel = std::max(panel_tol / std::max(l1, std::numeric_limits<double>::min()),
                                64.0 * std::numeric_limits<double>::epsilon());
    const double v = bq::gauss_kronrod<double, 31>::integrate(f, lo, hi, kMaxDepth, rel, &err, &l1);
    out.value += v;
    out.error += err;
    mass += l1;
  }
  if (!std::isfinite(out.value) || out.error > kFailureSlack * abs_tol + 1e-12 * mass) {
    throw NumericalError("adaptive quadrature did not converge (error estimate " +
                         format_number(out.error) + ", int |f| " + format_number(mass) + ", " +
                         std::to_string(panels) + " panels)");
  }
  return out;
}

QuadratureResult integrate_to_infinity(const RealFunction& f, double a, double rel_tol) {
  bq::exp_sinh<double> rule;
  double err = 0.0;
  double l1 = 0.0;
  const double v = rule.integrate(
      [&](double y) { return f(a + y); }, 0.0, std::numeric_limits<double>::infinity(), rel_tol, &err,
      &l1);
  if (!std::isfinite(v) || err > kFailureSlack * rel_tol * std::max(l1, 1e-300)) {
    throw NumericalError("exp-sinh quadrature did not converge (error estimate " + format_number(err) + ", int |f| " +
                         format_number(l1) + ")");
  }
  return {v, err};
}

QuadratureResult integrate_singular(const RealFunction& f, double a, double b, double rel_tol) {
  bq::tanh_sinh<double> rule;
  double err = 0.0;
  double l1 = 0.0;
  const double v = rule.integrate(f, a, b, rel_tol, &err, &l1);
  if (!std::isfinite(v) || err > kFailureSlack * rel_tol * std::max(l1, 1e-300)) {
    throw NumericalError("tanh-sinh quadrature did not converge");
  }
  return {v, err};
}

}  // namespace addmc
