#pragma once

#include <cstddef>

#include "dkc/numerics/optimize.hpp"

namespace dkc::numerics {

struct QuadOptions {
  double tol = 1e-12;
  /// Map x = (a+b)/2 - (b-a)/2 cos(theta) so that inverse-square-root
  /// singularities at either endpoint become smooth.
  bool endpoint_singular = false;
  std::size_t max_subdivisions = 4000;
};

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature of g over [a, b].
/// Converged when the estimated error is below tol * max(1, |I|).
/// Throws ConvergenceError if the subdivision budget runs out.
double quad(const ScalarFunction& g, double a, double b, const QuadOptions& opt = {});

}  // namespace dkc::numerics
