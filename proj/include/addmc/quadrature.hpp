#pragma once

#include <functional>

namespace addmc {

using RealFunction = std::function<double(double)>;

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
};

/// Adaptive Gauss-Kronrod on [a, b], split into `panels` equal pieces.
/// Throws NumericalError when the summed error estimate exceeds abs_tol.
QuadratureResult integrate(const RealFunction& f, double a, double b, double abs_tol,
                           int panels = 1);

/// int_a^inf f, f integrable and decaying. Uses exp-sinh.
QuadratureResult integrate_to_infinity(const RealFunction& f, double a, double rel_tol);

/// int_a^b f with possible integrable endpoint singularities. Uses tanh-sinh.
QuadratureResult integrate_singular(const RealFunction& f, double a, double b, double rel_tol);

}  // namespace addmc
