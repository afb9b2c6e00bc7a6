#pragma once

// Adaptive Dormand-Prince 5(4) integrator with Hairer's fourth-order dense
// output. Header-only because it is templated on the state dimension.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "dkc/error.hpp"

namespace dkc::numerics {

template <std::size_t N>
using OdeState = std::array<double, N>;

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-14;
  double initial_step = 0.0;  // 0 selects automatically
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 5'000'000;
};

struct OdeStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
};

template <std::size_t N>
class OdeSolution;

template <std::size_t N, class F>
OdeSolution<N> integrate_ode(F&& f, double t0, double t1, const OdeState<N>& y0,
                             const OdeOptions& opt = {});

template <std::size_t N>
class OdeSolution {
 public:
  const std::vector<double>& grid() const noexcept { return grid_; }
  const std::vector<OdeState<N>>& states() const noexcept { return states_; }
  const OdeStats& stats() const noexcept { return stats_; }

  double t0() const { return grid_.front(); }
  double t1() const { return grid_.back(); }
  const OdeState<N>& final_state() const { return states_.back(); }

  /// Continuous interpolant; exact (to rounding) at grid nodes.
  OdeState<N> operator()(double t) const {
    if (t <= grid_.front()) return states_.front();
    if (t >= grid_.back()) return states_.back();
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - grid_.begin()) - 1;
    const Segment& s = segments_[i];
    const double theta = (t - grid_[i]) / s.h;
    const double theta1 = 1.0 - theta;
    OdeState<N> y{};
    for (std::size_t k = 0; k < N; ++k) {
      y[k] = s.r[0][k] +
             theta * (s.r[1][k] +
                      theta1 * (s.r[2][k] + theta * (s.r[3][k] + theta1 * s.r[4][k])));
    }
    return y;
  }

 private:
  struct Segment {
    double h;
    std::array<OdeState<N>, 5> r;
  };

  template <std::size_t M, class F>
  friend OdeSolution<M> integrate_ode(F&& f, double t0, double t1,
                                      const OdeState<M>& y0, const OdeOptions& opt);

  std::vector<double> grid_;
  std::vector<OdeState<N>> states_;
  std::vector<Segment> segments_;
  OdeStats stats_;
};

namespace ode_detail {

struct DormandPrince {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                          a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432.0,
                          d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0,
                          d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0,
                          d7 = 69997945.0 / 29380423.0;
};

template <std::size_t N>
bool all_finite(const OdeState<N>& y) {
  return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

template <std::size_t N>
double error_norm(const OdeState<N>& err, const OdeState<N>& y0,
                  const OdeState<N>& y1, const OdeOptions& opt) {
  double sum = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sc = opt.atol + opt.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double q = err[i] / sc;
    sum += q * q;
  }
  return std::sqrt(sum / static_cast<double>(N));
}

}  // namespace ode_detail

/// Integrates y' = f(t, y) from t0 to t1 (t1 > t0).
///
/// Local error per step is held below atol + rtol |y| in the RMS norm.
/// Non-finite derivatives reject the step and shrink it; if the step size
/// underflows an IntegrationFailure carrying the last accepted time is thrown.
template <std::size_t N, class F>
OdeSolution<N> integrate_ode(F&& f, double t0, double t1, const OdeState<N>& y0,
                             const OdeOptions& opt) {
  using T = ode_detail::DormandPrince;
  if (!(t1 > t0)) throw InvalidInput("integrate_ode: requires t1 > t0");
  if (!ode_detail::all_finite(y0)) throw InvalidInput("integrate_ode: non-finite y0");

  OdeSolution<N> sol;
  sol.grid_.push_back(t0);
  sol.states_.push_back(y0);

  auto eval = [&](double t, const OdeState<N>& y) {
    ++sol.stats_.evaluations;
    return f(t, y);
  };

  OdeState<N> y = y0;
  double t = t0;
  OdeState<N> k1 = eval(t, y);
  if (!ode_detail::all_finite(k1)) {
    throw IntegrationFailure("integrate_ode: non-finite derivative at t0", t0);
  }

  const double span = t1 - t0;
  double h = opt.initial_step;
  if (h <= 0.0) {
    // Hairer & Wanner's starting-step heuristic, first-derivative part only.
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = opt.atol + opt.rtol * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1 += (k1[i] / sc) * (k1[i] / sc);
    }
    d0 = std::sqrt(d0 / N);
    d1 = std::sqrt(d1 / N);
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * span : 0.01 * d0 / d1;
    h = std::min(h, span);
  }
  h = std::min(h, opt.max_step);

  OdeState<N> k2, k3, k4, k5, k6, k7, ytmp, ynew, err;
  for (std::size_t step = 0;; ++step) {
    if (step >= opt.max_steps) {
      throw IntegrationFailure("integrate_ode: step budget exhausted", t);
    }
    bool last = false;
    if (t + h >= t1 || (t1 - (t + h)) < 1e-12 * span) {
      h = t1 - t;
      last = true;
    }
    if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), span)) {
      std::ostringstream msg;
      msg << "integrate_ode: step size underflow at t = " << t;
      throw IntegrationFailure(msg.str(), t);
    }

    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * T::a21 * k1[i];
    k2 = eval(t + T::c2 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (T::a31 * k1[i] + T::a32 * k2[i]);
    k3 = eval(t + T::c3 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (T::a41 * k1[i] + T::a42 * k2[i] + T::a43 * k3[i]);
    k4 = eval(t + T::c4 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (T::a51 * k1[i] + T::a52 * k2[i] + T::a53 * k3[i] +
                            T::a54 * k4[i]);
    k5 = eval(t + T::c5 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (T::a61 * k1[i] + T::a62 * k2[i] + T::a63 * k3[i] +
                            T::a64 * k4[i] + T::a65 * k5[i]);
    const double tnew = last ? t1 : t + h;
    k6 = eval(tnew, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + h * (T::a71 * k1[i] + T::a73 * k3[i] + T::a74 * k4[i] +
                            T::a75 * k5[i] + T::a76 * k6[i]);
    k7 = eval(tnew, ynew);

    double err_norm = std::numeric_limits<double>::infinity();
    if (ode_detail::all_finite(ynew) && ode_detail::all_finite(k7)) {
      for (std::size_t i = 0; i < N; ++i)
        err[i] = h * (T::e1 * k1[i] + T::e3 * k3[i] + T::e4 * k4[i] + T::e5 * k5[i] +
                      T::e6 * k6[i] + T::e7 * k7[i]);
      err_norm = ode_detail::error_norm(err, y, ynew, opt);
      if (!std::isfinite(err_norm)) err_norm = std::numeric_limits<double>::infinity();
    }

    if (err_norm <= 1.0) {
      typename OdeSolution<N>::Segment seg;
      seg.h = h;
      for (std::size_t i = 0; i < N; ++i) {
        const double dy = ynew[i] - y[i];
        const double bspl = h * k1[i] - dy;
        seg.r[0][i] = y[i];
        seg.r[1][i] = dy;
        seg.r[2][i] = bspl;
        seg.r[3][i] = dy - h * k7[i] - bspl;
        seg.r[4][i] = h * (T::d1 * k1[i] + T::d3 * k3[i] + T::d4 * k4[i] +
                           T::d5 * k5[i] + T::d6 * k6[i] + T::d7 * k7[i]);
      }
      sol.segments_.push_back(seg);
      ++sol.stats_.accepted;
      t = tnew;
      y = ynew;
      k1 = k7;
      sol.grid_.push_back(t);
      sol.states_.push_back(y);
      if (last) break;
      const double fac = err_norm == 0.0 ? 10.0 : 0.9 * std::pow(err_norm, -0.2);
      h = std::min(h * std::clamp(fac, 0.2, 10.0), opt.max_step);
    } else {
      ++sol.stats_.rejected;
      const double fac = std::isfinite(err_norm) ? 0.9 * std::pow(err_norm, -0.2) : 0.1;
      h *= std::clamp(fac, 0.1, 0.9);
    }
  }
  return sol;
}

}  // namespace dkc::numerics
