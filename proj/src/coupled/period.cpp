#include "dkc/coupled/period.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "dkc/error.hpp"
#include "dkc/numerics/quadrature.hpp"

namespace dkc {

namespace {

// Shrinks [outside, inside] to neighbouring doubles, keeping g(inside) > 0.
double polish_turning_point(const PotentialFunction& g, double outside, double inside) {
  for (int i = 0; i < 2000; ++i) {
    const double mid = 0.5 * (outside + inside);
    if (mid == outside || mid == inside) break;
    if (g(mid) > 0.0) {
      inside = mid;
    } else {
      outside = mid;
    }
  }
  return inside;
}

// Lagrange extrapolation of f to s from samples at d, 2d and 3d.
double extrapolate(double f1, double f2, double f3, double s, double d) {
  const double u = s / d;
  return f1 * (u - 2.0) * (u - 3.0) / 2.0 - f2 * (u - 1.0) * (u - 3.0) +
         f3 * (u - 1.0) * (u - 2.0) / 2.0;
}

}  // namespace

double classical_period(const PotentialFunction& v_int, double binding_energy,
                        double reduced_mass, numerics::Bracket window,
                        const PeriodOptions& opt) {
  if (!(reduced_mass > 0.0)) throw InvalidInput("classical_period: mass must be positive");
  if (!std::isfinite(binding_energy)) throw InvalidInput("classical_period: non-finite energy");
  if (!(window.hi > window.lo)) throw InvalidInput("classical_period: empty window");
  if (opt.scan_points < 3) throw InvalidInput("classical_period: too few scan points");

  const PotentialFunction g = [&](double r) { return -binding_energy - v_int(r); };

  const std::size_t n = opt.scan_points;
  const double step = (window.hi - window.lo) / static_cast<double>(n - 1);
  std::vector<double> xs(n);
  std::vector<double> gs(n);
  std::size_t best = 0;
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = (i + 1 == n) ? window.hi : window.lo + static_cast<double>(i) * step;
    gs[i] = g(xs[i]);
    if (!std::isfinite(gs[i])) gs[i] = -INFINITY;
    if (gs[i] > gs[best]) best = i;
  }
  if (!(gs[best] > 0.0)) throw DomainError("classical_period: no allowed region in window");

  std::size_t left = best;
  while (left > 0 && gs[left - 1] > 0.0) --left;
  std::size_t right = best;
  while (right + 1 < n && gs[right + 1] > 0.0) ++right;
  if (left == 0 || right + 1 == n) {
    throw DomainError("classical_period: turning points not found in window");
  }

  const double a = polish_turning_point(g, xs[left - 1], xs[left]);
  const double b = polish_turning_point(g, xs[right + 1], xs[right]);
  const double width = b - a;

  // With g = (r - a)(b - r) q(r) and r = (a+b)/2 - (b-a)/2 cos(theta) the
  // integral becomes the integral of q^{-1/2} over [0, pi]. Close to a turning
  // point q is a ratio of two vanishing quantities, so it is extrapolated
  // from a short distance inside.
  const double q_scale = gs[best] / (0.25 * width * width);
  const auto q_raw = [&](double r) { return g(r) / ((r - a) * (b - r) * q_scale); };
  const double d = 1e-3 * width;
  const double qa[3] = {q_raw(a + d), q_raw(a + 2 * d), q_raw(a + 3 * d)};
  const double qb[3] = {q_raw(b - d), q_raw(b - 2 * d), q_raw(b - 3 * d)};
  const auto q = [&](double theta) {
    const double from_a = width * std::pow(std::sin(0.5 * theta), 2);
    const double from_b = width * std::pow(std::cos(0.5 * theta), 2);
    if (from_a < d) return extrapolate(qa[0], qa[1], qa[2], from_a, d);
    if (from_b < d) return extrapolate(qb[0], qb[1], qb[2], from_b, d);
    return q_raw(a + from_a);
  };

  numerics::QuadOptions qopt;
  qopt.tol = opt.quad_tol;
  const double core = numerics::quad(
      [&](double theta) {
        const double qt = q(theta);
        if (!(qt > 0.0)) throw DomainError("classical_period: potential not single-well between turning points");
        return 1.0 / std::sqrt(qt);
      },
      0.0, std::numbers::pi, qopt);
  const double integral = core / std::sqrt(q_scale);
  return std::sqrt(2.0 * reduced_mass) * integral;
}

}  // namespace dkc
