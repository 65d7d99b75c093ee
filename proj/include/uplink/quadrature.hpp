#pragma once

#include <functional>
#include <string>

namespace uplink::quad {

struct QuadratureSpec {
  double abs_tol = 1e-8;
  double rel_tol = 1e-6;
  int max_subdivisions = 200;

  void validate() const;
  // Tolerances divided by `factor`, used one level deeper in a nested integral.
  QuadratureSpec tightened(double factor = 10.0) const;
  // max(abs_tol, rel_tol * |value|)
  double tolerance_for(double value) const;
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
// Endpoints are never evaluated, so integrable endpoint singularities are
// fine. Throws NumericalError if f returns a non-finite value; a result that
// misses the tolerance within max_subdivisions comes back with
// converged = false.
IntegralResult integrate_finite(const Integrand& f, double a, double b,
                                const QuadratureSpec& spec = {});

// Integral of f over [a, inf) through x = a + scale * u / (1 - u).
// `scale` should be of the order of the width of f's mass.
IntegralResult integrate_semi_infinite(const Integrand& f, double a,
                                       const QuadratureSpec& spec = {},
                                       double scale = 1.0);

// Throws NumericalError naming `context` unless r.converged.
const IntegralResult& require_converged(const IntegralResult& r, const std::string& context);

}  // namespace uplink::quad
