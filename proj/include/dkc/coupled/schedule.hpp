#pragma once

namespace dkc {

/// Linear on/off ramp of the molecular trap frequency:
/// omega^2(t) rises linearly to omega0^2 over t_r, holds, and falls linearly
/// back to zero over the last t_r of the kick.
class KickSchedule {
 public:
  /// Requires omega0 > 0, t_r >= 0 and t_dkc >= 2 t_r. t_r = 0 is an abrupt
  /// switch; t_dkc = 0 is "no kick".
  KickSchedule(double omega0, double t_r, double t_dkc);

  double omega0() const noexcept { return omega0_; }
  double t_r() const noexcept { return t_r_; }
  double t_dkc() const noexcept { return t_dkc_; }
  double hold_start() const noexcept { return t_r_; }
  double hold_end() const noexcept { return t_dkc_ - t_r_; }

  /// omega^2(t) / omega0^2 in [0, 1].
  double ramp_fraction(double t) const;

 private:
  double omega0_;
  double t_r_;
  double t_dkc_;
};

/// omega_mol^2(t) for t in [0, t_dkc]. Throws InvalidInput outside that range.
double ramp_omega_sq(double t, const KickSchedule& sched);

}  // namespace dkc
