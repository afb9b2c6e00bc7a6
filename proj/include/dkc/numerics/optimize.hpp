#pragma once

#include <functional>

namespace dkc::numerics {

using ScalarFunction = std::function<double(double)>;

struct Bracket {
  double lo;
  double hi;
};

struct MinimumResult {
  double x;
  double value;
};

/// Golden-section search for a minimum of a function assumed unimodal on the
/// bracket. Stops once the bracket is narrower than xtol and returns its
/// midpoint. Throws InvalidInput if g is non-finite anywhere it is sampled.
MinimumResult minimize_scalar(const ScalarFunction& g, Bracket bracket,
                              double xtol = 1e-8);

/// Bisection root finder; requires g(lo) and g(hi) of opposite sign
/// (BracketError otherwise).
double find_root(const ScalarFunction& g, Bracket bracket, double xtol = 1e-12);

}  // namespace dkc::numerics
