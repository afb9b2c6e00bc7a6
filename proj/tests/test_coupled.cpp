#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "dkc/coupled/dynamics.hpp"
#include "dkc/error.hpp"
#include "dkc/numerics/ode.hpp"
#include "dkc/units.hpp"
#include "test_support.hpp"

using namespace dkc;
using dkc::test::rel_close;

namespace {

const double kTwoPi = 2.0 * std::numbers::pi;
const double kOmega100 = kTwoPi * 100.0;

CoupledState fig1_state() {
  return {4.06e-6, 2.55e-3, 1000.0 * constants::bohr_radius, 0.0, 0.0};
}

KickSchedule fig1_schedule() { return {kOmega100, 1e-6, 150e-6}; }

double nano(double kelvin) { return kelvin * 1e9; }
double pico(double kelvin) { return kelvin * 1e12; }

// Relative agreement of two states, each coordinate judged against the
// magnitude of its own channel (position and velocity/omega together).
double state_mismatch(const CoupledState& a, const CoupledState& b, double omega) {
  const double sR = std::max({std::abs(a.R), std::abs(a.R_dot) / omega, 1e-300});
  const double sr = std::max({std::abs(a.r), std::abs(a.r_dot) / omega, 1e-300});
  return std::max({std::abs(a.R - b.R) / sR, std::abs(a.R_dot - b.R_dot) / (omega * sR),
                   std::abs(a.r - b.r) / sr, std::abs(a.r_dot - b.r_dot) / (omega * sr)});
}

}  // namespace

TEST_CASE("ramp schedule") {
  const KickSchedule s(kOmega100, 1e-6, 150e-6);
  const double w2 = kOmega100 * kOmega100;
  CHECK(ramp_omega_sq(0.0, s) == 0.0);
  CHECK(ramp_omega_sq(1e-6, s) == w2);
  CHECK(ramp_omega_sq(75e-6, s) == w2);
  CHECK(ramp_omega_sq(150e-6, s) == 0.0);
  CHECK(rel_close(ramp_omega_sq(150e-6 - 0.5e-6, s), 0.5 * w2, 1e-9));
  CHECK(rel_close(ramp_omega_sq(0.25e-6, s), 0.25 * w2, 1e-12));
  CHECK_THROWS_AS(ramp_omega_sq(-1e-9, s), InvalidInput);
  CHECK_THROWS_AS(ramp_omega_sq(151e-6, s), InvalidInput);

  CHECK_THROWS_AS(KickSchedule(0.0, 1e-6, 1e-4), InvalidInput);
  CHECK_THROWS_AS(KickSchedule(1.0, -1e-6, 1e-4), InvalidInput);
  CHECK_THROWS_AS(KickSchedule(1.0, 1e-6, 1.5e-6), InvalidInput);
  CHECK_NOTHROW(KickSchedule(1.0, 0.0, 0.0));
}

TEST_CASE("normal mode transform") {
  const NormalModeState n = to_normal_modes({1.0, 0.0, 1.0, 0.0, 0.0}, 2.0);
  CHECK(n.z_plus == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(n.z_minus == doctest::Approx(4.0 / 3.0).epsilon(1e-15));

  const NormalModeState same = to_normal_modes({2.5, -1.0, 0.0, 0.0, 0.0}, 3.7);
  CHECK(same.z_plus == 2.5);
  CHECK(same.z_minus == 2.5);
  CHECK(same.z_plus_dot == -1.0);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> g(0.2, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const CoupledState s{u(rng), u(rng), u(rng), u(rng), 0.0};
    const double gamma = g(rng);
    const CoupledState back = from_normal_modes(to_normal_modes(s, gamma), gamma);
    CHECK(std::abs(back.R - s.R) <= 1e-14 * std::max(1.0, std::abs(s.R)) * 4);
    CHECK(std::abs(back.R_dot - s.R_dot) <= 1e-14 * std::max(1.0, std::abs(s.R_dot)) * 4);
    CHECK(std::abs(back.r - s.r) <= 1e-14 * std::max(1.0, std::abs(s.r)) * 4);
    CHECK(std::abs(back.r_dot - s.r_dot) <= 1e-14 * std::max(1.0, std::abs(s.r_dot)) * 4);
  }
  CHECK_THROWS_AS(to_normal_modes({}, 0.0), InvalidInput);
}

TEST_CASE("eigenfrequencies agree with mode factors") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pd(0.1, 5.0);
  std::uniform_real_distribution<double> md(1.0, 200.0);
  for (int i = 0; i < 500; ++i) {
    const SpeciesPair pair(md(rng), md(rng), pd(rng));
    const double w = 123.4;
    const ModeFactors a = mode_factors(pair);
    const ModeFrequencies f = normal_mode_frequencies(pair, w);
    // The labelling of the two roots follows the larger factor.
    const double hi = std::sqrt(std::max(a.alpha_plus, a.alpha_minus)) * w;
    const double lo = std::sqrt(std::min(a.alpha_plus, a.alpha_minus)) * w;
    CHECK(rel_close(f.omega_plus, hi, 1e-12));
    CHECK(rel_close(f.omega_minus, lo, 1e-12));
  }
}

TEST_CASE("normal modes diagonalise the coupled force") {
  // Applying the coupled acceleration to a pure mode must return that mode
  // scaled by -alpha w^2.
  const SpeciesPair pair = SpeciesPair::potassium_rubidium();
  const double gamma = pair.mass_ratio();
  const double w2 = 1.0;
  const double rel = relative_frequency_ratio_sq(pair);
  const double coup = coupling_frequency_ratio_sq(pair);
  const double mf = pair.reduced_mass() / pair.total_mass();
  const ModeFactors a = mode_factors(pair);
  auto accel = [&](const CoupledState& s) {
    return CoupledState{-w2 * s.R + mf * coup * w2 * s.r, 0.0, -rel * w2 * s.r + coup * w2 * s.R,
                        0.0, 0.0};
  };
  const CoupledState only_plus = from_normal_modes({1.0, 0.0, 0.0, 0.0}, gamma);
  const NormalModeState ap = to_normal_modes(accel(only_plus), gamma);
  CHECK(rel_close(ap.z_plus, -a.alpha_plus, 1e-13));
  CHECK(std::abs(ap.z_minus) < 1e-13);
  const CoupledState only_minus = from_normal_modes({0.0, 0.0, 1.0, 0.0}, gamma);
  const NormalModeState am = to_normal_modes(accel(only_minus), gamma);
  CHECK(rel_close(am.z_minus, -a.alpha_minus, 1e-13));
  CHECK(std::abs(am.z_plus) < 1e-13);
}

TEST_CASE("reporting grid") {
  const auto g = reporting_grid(150e-6, 1e-6);
  CHECK(g.size() == 151);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 150e-6);
  CHECK(std::is_sorted(g.begin(), g.end()));
  const auto h = reporting_grid(10e-6, 3e-6);
  CHECK(h.size() == 5);
  CHECK(h.back() == 10e-6);
  CHECK(reporting_grid(0.0, 1e-6).size() == 1);
  CHECK_THROWS_AS(reporting_grid(1e-4, 0.0), InvalidInput);
}

TEST_CASE("energies") {
  const SpeciesPair pair = SpeciesPair::potassium_rubidium();
  const CoupledState s0 = fig1_state();
  const double w2 = kOmega100 * kOmega100;
  const ChannelEnergies off = energies(s0, pair, 0.0, 0.0, 0.0);
  // Trap off: kinetic energy only, M Rdot^2 / k_B.
  CHECK(nano(temperature_equivalent(off.E_R)) == doctest::Approx(100.0).epsilon(0.01));
  const ChannelEnergies on = energies(s0, pair, w2, 0.0, 0.0);
  CHECK(nano(temperature_equivalent(on.E_R)) == doctest::Approx(200.0).epsilon(0.01));

  CoupledState no_r = s0;
  no_r.r = 0.0;
  CHECK(energies(no_r, pair, w2, w2, w2).E_c == 0.0);
  CoupledState no_R = s0;
  no_R.R = 0.0;
  CHECK(energies(no_R, pair, w2, w2, w2).E_c == 0.0);

  const ChannelEnergies e = energies({1.0, 2.0, 3.0, 4.0, 0.0}, SpeciesPair(1.0, 3.0, 1.0), 5.0,
                                     6.0, 7.0);
  CHECK(e.E_R == doctest::Approx(0.5 * 4.0 * (5.0 + 4.0)));
  CHECK(e.E_r == doctest::Approx(0.5 * 0.75 * (6.0 * 9.0 + 16.0)));
  CHECK(e.E_c == doctest::Approx(-0.75 * 7.0 * 3.0));
}

TEST_CASE("fig1 scenario") {
  const SpeciesPair pair = SpeciesPair::potassium_rubidium(1.10);
  const auto coupled = propagate_analytic(fig1_state(), fig1_schedule(), pair, 1e-6);
  const auto uncoupled = propagate_uncoupled(fig1_state(), fig1_schedule(), pair, 1e-6);
  const auto ER = coupled.energy.E_R_kelvin();
  const auto Er = coupled.energy.E_r_kelvin();
  const auto Ec = coupled.energy.E_c_kelvin();
  const auto ER_u = uncoupled.energy.E_R_kelvin();
  REQUIRE(coupled.trajectory.size() == 151);
  REQUIRE(coupled.energy.times[1] == 1e-6);

  CHECK(nano(ER.front()) == doctest::Approx(100.0).epsilon(0.01));
  CHECK(nano(ER[1]) == doctest::Approx(200.0).epsilon(0.01));
  CHECK(nano(ER.back()) > 79.0);
  CHECK(nano(ER.back()) < 83.0);

  const double diff = std::abs(ER.back() - ER_u.back()) / ER_u.back();
  CHECK(diff > 0.00035);
  CHECK(diff < 0.00055);

  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < Ec.size(); ++i) {
    const double t = coupled.energy.times[i];
    if (t < 1e-6 || t > 149e-6) continue;
    lo = std::min(lo, pico(Ec[i]));
    hi = std::max(hi, pico(Ec[i]));
  }
  CHECK(lo > -570.0);
  CHECK(hi < -380.0);

  const double dEr = pico(Er.back() - Er.front());
  CHECK(dEr > 75.0);
  CHECK(dEr < 125.0);

  for (double v : uncoupled.energy.E_c) CHECK(v == 0.0);
}

TEST_CASE("fig1 analytic and numeric agree") {
  const SpeciesPair pair = SpeciesPair::potassium_rubidium(1.10);
  const auto a = propagate_analytic(fig1_state(), fig1_schedule(), pair, 5e-6);
  const auto n = propagate_numeric(fig1_state(), fig1_schedule(), pair, 5e-6);
  REQUIRE(a.trajectory.size() == n.trajectory.size());
  const auto fa = a.trajectory.state(a.trajectory.size() - 1);
  const auto fn = n.trajectory.state(n.trajectory.size() - 1);
  CHECK(rel_close(fa.R, fn.R, 1e-8));
  CHECK(rel_close(fa.R_dot, fn.R_dot, 1e-8));
  CHECK(rel_close(fa.r, fn.r, 1e-8));
  CHECK(rel_close(fa.r_dot, fn.r_dot, 1e-8));
  for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
    CHECK(state_mismatch(a.trajectory.state(i), n.trajectory.state(i), kOmega100) < 1e-8);
  }
}

TEST_CASE("randomised analytic versus numeric") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> pd(0.5, 3.0);
  std::uniform_real_distribution<double> fd(20.0, 400.0);
  std::uniform_real_distribution<double> td(20e-6, 300e-6);
  std::uniform_real_distribution<double> rd(0.2e-6, 5e-6);
  std::uniform_real_distribution<double> sd(-1.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const SpeciesPair pair = SpeciesPair::potassium_rubidium(pd(rng));
    const double w0 = kTwoPi * fd(rng);
    const KickSchedule sched(w0, rd(rng), td(rng));
    const CoupledState s0{4e-6 * sd(rng), 3e-3 * sd(rng), 5e-8 * sd(rng), 1e-4 * sd(rng), 0.0};
    const auto a = propagate_analytic(s0, sched, pair, sched.t_dkc());
    const auto n = propagate_numeric(s0, sched, pair, sched.t_dkc());
    worst = std::max(worst, state_mismatch(a.trajectory.state(1), n.trajectory.state(1), w0));
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("zero initial state stays zero") {
  const SpeciesPair pair = SpeciesPair::potassium_rubidium();
  for (const auto& p : {propagate_analytic({}, fig1_schedule(), pair, 10e-6),
                        propagate_numeric({}, fig1_schedule(), pair, 10e-6)}) {
    for (std::size_t i = 0; i < p.trajectory.size(); ++i) {
      CHECK(p.trajectory.R[i] == 0.0);
      CHECK(p.trajectory.r_dot[i] == 0.0);
      CHECK(p.energy.E_R[i] == 0.0);
    }
  }
}

TEST_CASE("hold phase conserves total energy") {
  const SpeciesPair pair = SpeciesPair::potassium_rubidium(1.10);
  const KickSchedule sched(kOmega100, 2e-6, 400e-6);
  const CoupledState s0 = fig1_state();
  for (const auto& p : {propagate_analytic(s0, sched, pair, 1e-6),
                        propagate_numeric(s0, sched, pair, 1e-6, 1e-13)}) {
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t i = 0; i < p.energy.size(); ++i) {
      const double t = p.energy.times[i];
      if (t < sched.hold_start() || t > sched.hold_end()) continue;
      const double e = p.energy.E_R[i] + p.energy.E_r[i] + p.energy.E_c[i];
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
    CHECK((hi - lo) / hi < 1e-10);
  }
}

TEST_CASE("linearity") {
  const SpeciesPair pair = SpeciesPair::potassium_rubidium(1.7);
  const KickSchedule sched(kTwoPi * 250.0, 3e-6, 120e-6);
  const CoupledState s0{1e-6, -2e-3, 3e-8, 5e-5, 0.0};
  const double c = -3.25;
  const CoupledState s1{c * s0.R, c * s0.R_dot, c * s0.r, c * s0.r_dot, 0.0};
  const auto a = propagate_analytic(s0, sched, pair, 7e-6);
  const auto b = propagate_analytic(s1, sched, pair, 7e-6);
  for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
    CHECK(std::abs(b.trajectory.R[i] - c * a.trajectory.R[i]) <= 1e-14 * 4e-6);
    CHECK(std::abs(b.trajectory.r[i] - c * a.trajectory.r[i]) <= 1e-14 * 4e-6);
    CHECK(std::abs(b.trajectory.R_dot[i] - c * a.trajectory.R_dot[i]) <= 1e-14 * 1e-2);
  }
}

TEST_CASE("magic ratio decouples the channels") {
  const SpeciesPair base = SpeciesPair::potassium_rubidium();
  const SpeciesPair magic = base.with_p(magic_polarizability_ratio(base));
  const CoupledState s0 = fig1_state();
  const auto c = propagate_analytic(s0, fig1_schedule(), magic, 2e-6);
  const auto u = propagate_uncoupled(s0, fig1_schedule(), magic, 2e-6);
  for (std::size_t i = 0; i < c.trajectory.size(); ++i) {
    CHECK(rel_close(c.trajectory.R[i], u.trajectory.R[i], 1e-12));
    CHECK(rel_close(c.trajectory.r[i], u.trajectory.r[i], 1e-12));
    CHECK(rel_close(c.energy.E_R[i], u.energy.E_R[i], 1e-12));
  }

  // Numeric coupled run against a standalone one-dimensional oscillator.
  const KickSchedule sched = fig1_schedule();
  const auto n = propagate_numeric(s0, sched, magic, 5e-6, 1e-12);
  const double w0 = sched.omega0();
  auto rhs = [&](double t, const numerics::OdeState<2>& y) {
    return numerics::OdeState<2>{y[1], -ramp_omega_sq(std::min(t, sched.t_dkc()), sched) * y[0]};
  };
  numerics::OdeOptions opt;
  opt.rtol = 1e-13;
  opt.atol = 1e-30;
  opt.max_step = sched.t_r() / 4.0;
  const auto ref = numerics::integrate_ode<2>(rhs, 0.0, sched.t_dkc(), {s0.R, s0.R_dot}, opt);
  for (std::size_t i = 0; i < n.trajectory.size(); ++i) {
    const auto y = ref(n.trajectory.t[i]);
    CHECK(std::abs(n.trajectory.R[i] - y[0]) <= 1e-10 * 4.06e-6);
    CHECK(std::abs(n.trajectory.R_dot[i] - y[1]) <= 1e-10 * 4.06e-6 * w0);
  }
}

TEST_CASE("relative channel is a cosine in a constant trap") {
  const SpeciesPair pair = SpeciesPair::potassium_rubidium();
  const KickSchedule sched(kOmega100, 0.0, 500e-6);
  const CoupledState s0{0.0, 0.0, 5e-8, 0.0, 0.0};
  const auto u = propagate_uncoupled(s0, sched, pair, 10e-6);
  const double wr = std::sqrt(relative_frequency_ratio_sq(pair)) * kOmega100;
  for (std::size_t i = 0; i < u.trajectory.size(); ++i) {
    CHECK(std::abs(u.trajectory.r[i] - 5e-8 * std::cos(wr * u.trajectory.t[i])) < 1e-22);
  }
}

TEST_CASE("normal modes obey their own equations along a numeric run") {
  const SpeciesPair pair = SpeciesPair::potassium_rubidium(1.10);
  const KickSchedule sched(kOmega100, 20e-6, 150e-6);
  const CoupledState s0 = fig1_state();
  const double h = 1e-6;
  const auto n = propagate_numeric(s0, sched, pair, h, 1e-13);
  const ModeFactors a = mode_factors(pair);
  const double gamma = pair.mass_ratio();
  const double scale = kOmega100 * kOmega100 * 4.06e-6;
  // Five-point derivative of the velocity channel approximates z''.
  auto accel = [&](std::size_t i, auto pick) {
    auto v = [&](std::size_t j) { return pick(to_normal_modes(n.trajectory.state(j), gamma)); };
    return (-v(i + 2) + 8.0 * v(i + 1) - 8.0 * v(i - 1) + v(i - 2)) / (12.0 * h);
  };
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < n.trajectory.size(); ++i) {
    const double t = n.trajectory.t[i];
    // Stencils straddling a kink of the schedule are not smooth.
    if (std::abs(t - sched.t_r()) < 2.5 * h || std::abs(t - sched.hold_end()) < 2.5 * h) continue;
    const auto m = to_normal_modes(n.trajectory.state(i), gamma);
    const double w2 = ramp_omega_sq(t, sched);
    const double rp = accel(i, [](const NormalModeState& s) { return s.z_plus_dot; }) +
                      a.alpha_plus * w2 * m.z_plus;
    const double rm = accel(i, [](const NormalModeState& s) { return s.z_minus_dot; }) +
                      a.alpha_minus * w2 * m.z_minus;
    worst = std::max({worst, std::abs(rp) / scale, std::abs(rm) / scale});
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("analytic propagator error paths") {
  const SpeciesPair pair = SpeciesPair::potassium_rubidium();
  CHECK_THROWS_AS(propagate_analytic({NAN, 0, 0, 0, 0}, fig1_schedule(), pair, 1e-6),
                  InvalidInput);
  CHECK_THROWS_AS(propagate_analytic(fig1_state(), fig1_schedule(), pair, -1.0), InvalidInput);
  CHECK_THROWS_AS(RampedOscillator(0.0, fig1_schedule(), 1.0, 0.0), InvalidInput);
  const RampedOscillator osc(1.0, fig1_schedule(), 1.0, 0.0);
  CHECK_THROWS_AS(osc(-1e-9), InvalidInput);
  CHECK_THROWS_AS(osc(1.0), InvalidInput);
}

TEST_CASE("abrupt schedule matches the ramped limit") {
  const SpeciesPair pair = SpeciesPair::potassium_rubidium();
  const CoupledState s0 = fig1_state();
  const auto abrupt = propagate_analytic(s0, KickSchedule(kOmega100, 0.0, 150e-6), pair, 150e-6);
  const auto tiny = propagate_analytic(s0, KickSchedule(kOmega100, 1e-9, 150e-6), pair, 150e-6);
  CHECK(state_mismatch(abrupt.trajectory.state(1), tiny.trajectory.state(1), kOmega100) < 1e-4);
  const auto numeric = propagate_numeric(s0, KickSchedule(kOmega100, 0.0, 150e-6), pair, 150e-6);
  CHECK(state_mismatch(abrupt.trajectory.state(1), numeric.trajectory.state(1), kOmega100) <
        1e-8);
}
