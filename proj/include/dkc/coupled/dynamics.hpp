#pragma once

// Coupled centre-of-mass / internuclear motion of a diatomic molecule in a
// harmonic trap whose depth follows a KickSchedule. In one dimension with
// maximal coupling the equations of motion are
//
//   R'' + w^2(t) R = (mu/M) w_c^2(t) r
//   r'' + w_r^2(t) r = w_c^2(t) R
//
// with w_r^2 and w_c^2 fixed multiples of w^2. The system separates into two
// normal modes z+ and z- oscillating at sqrt(alpha+-) w(t).

#include <cstddef>
#include <vector>

#include "dkc/coupled/schedule.hpp"
#include "dkc/species.hpp"

namespace dkc {

struct CoupledState {
  double R = 0.0;      // m
  double R_dot = 0.0;  // m/s
  double r = 0.0;      // m
  double r_dot = 0.0;  // m/s
  double t = 0.0;      // s
};

struct NormalModeState {
  double z_plus = 0.0;
  double z_plus_dot = 0.0;
  double z_minus = 0.0;
  double z_minus_dot = 0.0;
};

/// z+ = R - r gamma/(1+gamma), z- = R + r/(1+gamma); velocities alike.
NormalModeState to_normal_modes(const CoupledState& s, double gamma);
/// Inverse of to_normal_modes. The returned time is zero.
CoupledState from_normal_modes(const NormalModeState& n, double gamma);

struct ModeFactors {
  double alpha_plus;
  double alpha_minus;
};

/// w_+-^2 = alpha_+- w^2.
ModeFactors mode_factors(const SpeciesPair& pair);

struct ModeFrequencies {
  double omega_plus;
  double omega_minus;
};

/// Eigenfrequencies from the characteristic polynomial of the coupled
/// system, independent of mode_factors.
ModeFrequencies normal_mode_frequencies(const SpeciesPair& pair, double omega_mol);

/// One oscillator z'' + alpha w^2(t) z = 0 driven through a schedule, solved
/// piecewise in closed form: Airy functions on the ramps, sines and cosines
/// on the hold.
class RampedOscillator {
 public:
  /// Throws ConsistencyError if an Airy Wronskian at a matching point is off
  /// by more than 1e-10 relative.
  RampedOscillator(double alpha, const KickSchedule& sched, double z0, double z0_dot);

  struct Value {
    double z;
    double z_dot;
  };

  /// Requires t in [0, t_dkc].
  Value operator()(double t) const;

 private:
  double eta_ = 0.0;
  double Omega_ = 0.0;
  double t_r_;
  double t_hold_end_;
  double t_dkc_;
  double a_on_ = 0.0, b_on_ = 0.0;
  double c_ = 0.0, s_ = 0.0;
  double a_off_ = 0.0, b_off_ = 0.0;
};

/// Phase-space samples stored column-wise.
struct Trajectory {
  std::vector<double> t;
  std::vector<double> R;
  std::vector<double> R_dot;
  std::vector<double> r;
  std::vector<double> r_dot;

  std::size_t size() const noexcept { return t.size(); }
  CoupledState state(std::size_t i) const { return {R[i], R_dot[i], r[i], r_dot[i], t[i]}; }
  void push_back(const CoupledState& s);
};

/// Channel energies in joules. Temperature equivalents are 2E/k_B.
struct EnergyTrace {
  std::vector<double> times;
  std::vector<double> E_R;
  std::vector<double> E_r;
  std::vector<double> E_c;

  std::size_t size() const noexcept { return times.size(); }
  std::vector<double> E_R_kelvin() const;
  std::vector<double> E_r_kelvin() const;
  std::vector<double> E_c_kelvin() const;
};

double temperature_equivalent(double energy_joule);

struct ChannelEnergies {
  double E_R;
  double E_r;
  double E_c;
};

/// E_R = M/2 (w^2 R^2 + R'^2), E_r = mu/2 (w_r^2 r^2 + r'^2), E_c = -mu w_c^2 R r.
ChannelEnergies energies(const CoupledState& s, const SpeciesPair& pair,
                         double omega_mol_sq, double omega_r_sq, double omega_c_sq);

struct Propagation {
  Trajectory trajectory;
  EnergyTrace energy;
};

/// Sample times k * report_dt below t_dkc, followed by t_dkc itself.
std::vector<double> reporting_grid(double t_dkc, double report_dt);

/// Closed-form normal-mode propagation from s0 at t = 0.
Propagation propagate_analytic(const CoupledState& s0, const KickSchedule& sched,
                               const SpeciesPair& pair, double report_dt);

/// Direct integration of the coupled equations; independent check on
/// propagate_analytic.
Propagation propagate_numeric(const CoupledState& s0, const KickSchedule& sched,
                              const SpeciesPair& pair, double report_dt,
                              double rtol = 1e-10);

/// Same schedule with the coupling switched off; E_c is identically zero.
Propagation propagate_uncoupled(const CoupledState& s0, const KickSchedule& sched,
                                const SpeciesPair& pair, double report_dt);

}  // namespace dkc
