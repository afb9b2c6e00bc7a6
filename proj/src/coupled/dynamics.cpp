#include "dkc/coupled/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "dkc/error.hpp"
#include "dkc/numerics/airy.hpp"
#include "dkc/numerics/ode.hpp"
#include "dkc/simd/energy_kernels.hpp"
#include "dkc/units.hpp"

namespace dkc {

namespace {

void check_state(const CoupledState& s) {
  if (!std::isfinite(s.R) || !std::isfinite(s.R_dot) || !std::isfinite(s.r) ||
      !std::isfinite(s.r_dot)) {
    throw InvalidInput("coupled state must be finite");
  }
}

void check_wronskian(const numerics::AiryValues& v) {
  const double w = v.ai * v.bi_prime - v.ai_prime * v.bi;
  if (std::abs(std::numbers::pi * w - 1.0) > 1e-10) {
    throw ConsistencyError("Airy Wronskian mismatch at a matching point");
  }
}

// Coefficients (a, b) of y = a Ai + b Bi with y(x) = y, y'(x) = yp, using
// the Wronskian 1/pi in place of the determinant.
std::pair<double, double> match_airy(const numerics::AiryValues& v, double y, double yp) {
  check_wronskian(v);
  const double pi = std::numbers::pi;
  return {pi * (v.bi_prime * y - v.bi * yp), pi * (v.ai * yp - v.ai_prime * y)};
}

EnergyTrace trace_energies(const Trajectory& traj, const KickSchedule& sched,
                           const SpeciesPair& pair, bool coupled) {
  const std::size_t n = traj.size();
  EnergyTrace e;
  e.times = traj.t;
  e.E_R.resize(n);
  e.E_r.resize(n);
  e.E_c.resize(n);
  std::vector<double> w2(n);
  for (std::size_t i = 0; i < n; ++i) w2[i] = ramp_omega_sq(traj.t[i], sched);

  const double M = pair.total_mass();
  const double mu = pair.reduced_mass();
  const simd::EnergyCoefficients k{0.5 * M, 0.5 * mu, mu, relative_frequency_ratio_sq(pair),
                                   coupled ? coupling_frequency_ratio_sq(pair) : 0.0};
  simd::channel_energies({w2, traj.R, traj.R_dot, traj.r, traj.r_dot}, {e.E_R, e.E_r, e.E_c},
                         k);
  if (!coupled) std::fill(e.E_c.begin(), e.E_c.end(), 0.0);
  return e;
}

}  // namespace

NormalModeState to_normal_modes(const CoupledState& s, double gamma) {
  if (!(gamma > 0.0)) throw InvalidInput("to_normal_modes: gamma must be positive");
  const double wp = gamma / (1.0 + gamma);
  const double wm = 1.0 / (1.0 + gamma);
  return {s.R - wp * s.r, s.R_dot - wp * s.r_dot, s.R + wm * s.r, s.R_dot + wm * s.r_dot};
}

CoupledState from_normal_modes(const NormalModeState& n, double gamma) {
  if (!(gamma > 0.0)) throw InvalidInput("from_normal_modes: gamma must be positive");
  const double inv = 1.0 / (1.0 + gamma);
  CoupledState s;
  s.R = (n.z_plus + gamma * n.z_minus) * inv;
  s.R_dot = (n.z_plus_dot + gamma * n.z_minus_dot) * inv;
  s.r = n.z_minus - n.z_plus;
  s.r_dot = n.z_minus_dot - n.z_plus_dot;
  return s;
}

ModeFactors mode_factors(const SpeciesPair& pair) {
  const double gamma = pair.mass_ratio();
  const double p = pair.p();
  const double ap = (1.0 + gamma) / (1.0 + p);
  return {ap, p * ap / gamma};
}

ModeFrequencies normal_mode_frequencies(const SpeciesPair& pair, double omega_mol) {
  if (!(omega_mol > 0.0)) throw InvalidInput("normal_mode_frequencies: omega must be positive");
  const double w2 = omega_mol * omega_mol;
  const double wr2 = relative_frequency_ratio_sq(pair) * w2;
  const double wc2 = coupling_frequency_ratio_sq(pair) * w2;
  const double mass_fraction = pair.reduced_mass() / pair.total_mass();
  const double disc = std::sqrt((w2 - wr2) * (w2 - wr2) + 4.0 * mass_fraction * wc2 * wc2);
  const double wp2 = 0.5 * (w2 + wr2 + disc);
  // Product of the roots avoids cancellation in the smaller one.
  const double wm2 = (w2 * wr2 - mass_fraction * wc2 * wc2) / wp2;
  return {std::sqrt(wp2), std::sqrt(wm2)};
}

RampedOscillator::RampedOscillator(double alpha, const KickSchedule& sched, double z0,
                                   double z0_dot)
    : t_r_(sched.t_r()), t_hold_end_(sched.hold_end()), t_dkc_(sched.t_dkc()) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidInput("ramped oscillator: alpha must be positive");
  }
  const double w0 = sched.omega0();
  Omega_ = std::sqrt(alpha) * w0;

  double z_r = z0;
  double zd_r = z0_dot;
  if (t_r_ > 0.0) {
    eta_ = std::cbrt(alpha * w0 * w0 / t_r_);
    std::tie(a_on_, b_on_) = match_airy(numerics::airy(0.0), z0, -z0_dot / eta_);
    const auto v = numerics::airy(-eta_ * t_r_);
    check_wronskian(v);
    z_r = a_on_ * v.ai + b_on_ * v.bi;
    zd_r = -eta_ * (a_on_ * v.ai_prime + b_on_ * v.bi_prime);
  }

  const double cr = std::cos(Omega_ * t_r_);
  const double sr = std::sin(Omega_ * t_r_);
  c_ = z_r * cr - (zd_r / Omega_) * sr;
  s_ = z_r * sr + (zd_r / Omega_) * cr;

  if (t_r_ > 0.0) {
    const double ch = std::cos(Omega_ * t_hold_end_);
    const double sh = std::sin(Omega_ * t_hold_end_);
    const double z_h = c_ * ch + s_ * sh;
    const double zd_h = Omega_ * (s_ * ch - c_ * sh);
    std::tie(a_off_, b_off_) = match_airy(numerics::airy(-eta_ * t_r_), z_h, zd_h / eta_);
  }
}

RampedOscillator::Value RampedOscillator::operator()(double t) const {
  if (!(t >= 0.0 && t <= t_dkc_)) throw InvalidInput("ramped oscillator: time out of range");
  if (t < t_r_) {
    const auto v = numerics::airy(-eta_ * t);
    return {a_on_ * v.ai + b_on_ * v.bi, -eta_ * (a_on_ * v.ai_prime + b_on_ * v.bi_prime)};
  }
  if (t <= t_hold_end_) {
    const double c = std::cos(Omega_ * t);
    const double s = std::sin(Omega_ * t);
    return {c_ * c + s_ * s, Omega_ * (s_ * c - c_ * s)};
  }
  const auto v = numerics::airy(eta_ * (t - t_dkc_));
  return {a_off_ * v.ai + b_off_ * v.bi, eta_ * (a_off_ * v.ai_prime + b_off_ * v.bi_prime)};
}

void Trajectory::push_back(const CoupledState& s) {
  t.push_back(s.t);
  R.push_back(s.R);
  R_dot.push_back(s.R_dot);
  r.push_back(s.r);
  r_dot.push_back(s.r_dot);
}

double temperature_equivalent(double energy_joule) {
  return 2.0 * energy_joule / constants::k_boltzmann;
}

namespace {
std::vector<double> to_kelvin(const std::vector<double>& e) {
  std::vector<double> out(e.size());
  std::transform(e.begin(), e.end(), out.begin(), temperature_equivalent);
  return out;
}
}  // namespace

std::vector<double> EnergyTrace::E_R_kelvin() const { return to_kelvin(E_R); }
std::vector<double> EnergyTrace::E_r_kelvin() const { return to_kelvin(E_r); }
std::vector<double> EnergyTrace::E_c_kelvin() const { return to_kelvin(E_c); }

ChannelEnergies energies(const CoupledState& s, const SpeciesPair& pair, double omega_mol_sq,
                         double omega_r_sq, double omega_c_sq) {
  const double M = pair.total_mass();
  const double mu = pair.reduced_mass();
  return {0.5 * M * (omega_mol_sq * s.R * s.R + s.R_dot * s.R_dot),
          0.5 * mu * (omega_r_sq * s.r * s.r + s.r_dot * s.r_dot),
          -mu * omega_c_sq * s.R * s.r};
}

std::vector<double> reporting_grid(double t_dkc, double report_dt) {
  if (!(report_dt > 0.0) || !std::isfinite(report_dt)) {
    throw InvalidInput("report_dt must be positive");
  }
  if (!(t_dkc >= 0.0)) throw InvalidInput("t_dkc must be non-negative");
  std::vector<double> grid;
  const double n_float = std::floor(t_dkc / report_dt);
  if (n_float > 1e8) throw InvalidInput("report_dt too small for the kick duration");
  const auto n = static_cast<std::size_t>(n_float);
  grid.reserve(n + 2);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * report_dt;
    // Drop samples that would sit within rounding of the final point.
    if (t < t_dkc * (1.0 - 1e-12)) grid.push_back(t);
  }
  grid.push_back(t_dkc);
  return grid;
}

Propagation propagate_analytic(const CoupledState& s0, const KickSchedule& sched,
                               const SpeciesPair& pair, double report_dt) {
  check_state(s0);
  const double gamma = pair.mass_ratio();
  const ModeFactors a = mode_factors(pair);
  const NormalModeState n0 = to_normal_modes(s0, gamma);
  const RampedOscillator plus(a.alpha_plus, sched, n0.z_plus, n0.z_plus_dot);
  const RampedOscillator minus(a.alpha_minus, sched, n0.z_minus, n0.z_minus_dot);

  Propagation out;
  for (double t : reporting_grid(sched.t_dkc(), report_dt)) {
    const auto p = plus(t);
    const auto m = minus(t);
    CoupledState s = t == 0.0 ? s0 : from_normal_modes({p.z, p.z_dot, m.z, m.z_dot}, gamma);
    s.t = t;
    out.trajectory.push_back(s);
  }
  out.energy = trace_energies(out.trajectory, sched, pair, true);
  return out;
}

Propagation propagate_uncoupled(const CoupledState& s0, const KickSchedule& sched,
                                const SpeciesPair& pair, double report_dt) {
  check_state(s0);
  const RampedOscillator com(1.0, sched, s0.R, s0.R_dot);
  const RampedOscillator rel(relative_frequency_ratio_sq(pair), sched, s0.r, s0.r_dot);

  Propagation out;
  for (double t : reporting_grid(sched.t_dkc(), report_dt)) {
    const auto c = com(t);
    const auto v = rel(t);
    out.trajectory.push_back({c.z, c.z_dot, v.z, v.z_dot, t});
  }
  out.energy = trace_energies(out.trajectory, sched, pair, false);
  return out;
}

Propagation propagate_numeric(const CoupledState& s0, const KickSchedule& sched,
                              const SpeciesPair& pair, double report_dt, double rtol) {
  check_state(s0);
  if (!(rtol > 0.0)) throw InvalidInput("propagate_numeric: rtol must be positive");

  // Dimensionless time tau = w0 t and per-channel length scales keep both
  // coordinates of order one for the error control.
  const double w0 = sched.omega0();
  double L_R = std::max(std::abs(s0.R), std::abs(s0.R_dot) / w0);
  double L_r = std::max(std::abs(s0.r), std::abs(s0.r_dot) / w0);
  if (L_R == 0.0) L_R = L_r;
  if (L_r == 0.0) L_r = L_R;
  if (L_R == 0.0) L_R = L_r = 1.0;

  const double rel_sq = relative_frequency_ratio_sq(pair);
  const double coup_sq = coupling_frequency_ratio_sq(pair);
  const double mass_fraction = pair.reduced_mass() / pair.total_mass();
  const double k_R = mass_fraction * coup_sq * L_r / L_R;
  const double k_r = coup_sq * L_R / L_r;

  const double tau_r = w0 * sched.t_r();
  const double tau_h = w0 * sched.hold_end();
  const double tau_d = w0 * sched.t_dkc();

  using State = numerics::OdeState<4>;
  auto rhs_with = [&](auto fraction) {
    return [=](double tau, const State& y) {
      const double f = fraction(tau);
      return State{y[1], -f * y[0] + k_R * f * y[2], y[3], -rel_sq * f * y[2] + k_r * f * y[0]};
    };
  };

  numerics::OdeOptions opt;
  opt.rtol = rtol;
  opt.atol = 1e-14;

  struct Piece {
    double begin;
    double end;
    numerics::OdeSolution<4> sol;
  };
  std::vector<Piece> pieces;
  State y{s0.R / L_R, s0.R_dot / (w0 * L_R), s0.r / L_r, s0.r_dot / (w0 * L_r)};

  auto run = [&](double begin, double end, auto fraction) {
    if (!(end > begin)) return;
    auto sol = numerics::integrate_ode<4>(rhs_with(fraction), begin, end, y, opt);
    y = sol.final_state();
    pieces.push_back({begin, end, std::move(sol)});
  };
  run(0.0, tau_r, [tau_r](double tau) { return tau / tau_r; });
  run(tau_r, tau_h, [](double) { return 1.0; });
  run(tau_h, tau_d, [tau_r, tau_d](double tau) { return (tau_d - tau) / tau_r; });

  Propagation out;
  for (double t : reporting_grid(sched.t_dkc(), report_dt)) {
    State z{s0.R / L_R, s0.R_dot / (w0 * L_R), s0.r / L_r, s0.r_dot / (w0 * L_r)};
    const double tau = w0 * t;
    if (t == sched.t_dkc() && !pieces.empty()) {
      z = pieces.back().sol.final_state();
    } else if (t > 0.0 && !pieces.empty()) {
      const auto it = std::find_if(pieces.begin(), pieces.end(),
                                   [tau](const Piece& p) { return tau <= p.end; });
      z = (it == pieces.end() ? pieces.back() : *it).sol(tau);
    }
    out.trajectory.push_back({z[0] * L_R, z[1] * w0 * L_R, z[2] * L_r, z[3] * w0 * L_r, t});
  }
  out.energy = trace_energies(out.trajectory, sched, pair, true);
  return out;
}

}  // namespace dkc
