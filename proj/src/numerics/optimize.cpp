#include "dkc/numerics/optimize.hpp"

#include <cmath>
#include <utility>

#include "dkc/error.hpp"

namespace dkc::numerics {
namespace {

double checked(const ScalarFunction& g, double x) {
  const double v = g(x);
  if (!std::isfinite(v)) throw InvalidInput("objective is not finite on the bracket");
  return v;
}

}  // namespace

MinimumResult minimize_scalar(const ScalarFunction& g, Bracket bracket, double xtol) {
  double lo = bracket.lo;
  double hi = bracket.hi;
  if (lo > hi) std::swap(lo, hi);
  if (!(xtol > 0.0)) throw InvalidInput("minimize_scalar: xtol must be positive");

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = checked(g, x1);
  double f2 = checked(g, x2);
  while (hi - lo > xtol) {
    if (f1 == f2) {
      // For a unimodal g the minimum lies between two equal samples. Shrinking
      // to both keeps flat (rounding-limited) minima centred.
      lo = x1;
      hi = x2;
      x1 = hi - inv_phi * (hi - lo);
      x2 = lo + inv_phi * (hi - lo);
      f1 = checked(g, x1);
      f2 = checked(g, x2);
    } else if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = checked(g, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = checked(g, x2);
    }
  }
  const double mid = 0.5 * (lo + hi);
  return {mid, checked(g, mid)};
}

double find_root(const ScalarFunction& g, Bracket bracket, double xtol) {
  double lo = bracket.lo;
  double hi = bracket.hi;
  double glo = g(lo);
  const double ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if (!(glo * ghi < 0.0)) throw BracketError("find_root: no sign change on bracket");
  while (std::abs(hi - lo) > xtol) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace dkc::numerics
