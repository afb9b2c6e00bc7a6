#include "dkc/coupled/schedule.hpp"

#include <cmath>

#include "dkc/error.hpp"

namespace dkc {

KickSchedule::KickSchedule(double omega0, double t_r, double t_dkc)
    : omega0_(omega0), t_r_(t_r), t_dkc_(t_dkc) {
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) {
    throw InvalidInput("kick schedule: omega0 must be positive");
  }
  if (!(t_r >= 0.0) || !std::isfinite(t_r)) {
    throw InvalidInput("kick schedule: ramp time must be non-negative");
  }
  if (!(t_dkc >= 2.0 * t_r) || !std::isfinite(t_dkc)) {
    throw InvalidInput("kick schedule: t_dkc must be at least twice the ramp time");
  }
}

double KickSchedule::ramp_fraction(double t) const {
  if (t < t_r_) return t / t_r_;
  if (t <= t_dkc_ - t_r_) return 1.0;
  return (t_dkc_ - t) / t_r_;
}

double ramp_omega_sq(double t, const KickSchedule& sched) {
  if (!(t >= 0.0 && t <= sched.t_dkc())) {
    throw InvalidInput("ramp_omega_sq: time outside [0, t_dkc]");
  }
  const double w2 = sched.omega0() * sched.omega0();
  if (t < sched.t_r()) return w2 * t / sched.t_r();
  if (t <= sched.hold_end()) return w2;
  return w2 * (sched.t_dkc() - t) / sched.t_r();
}

}  // namespace dkc
