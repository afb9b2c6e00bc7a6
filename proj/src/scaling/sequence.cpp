#include "dkc/scaling/sequence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "dkc/coupled/schedule.hpp"
#include "dkc/error.hpp"
#include "dkc/numerics/ode.hpp"

namespace dkc::scaling {

namespace {

using State = numerics::OdeState<2>;

// A stretch of constant-shape trap history, integrated in tau = w_trap t.
struct Piece {
  double t_begin;
  double t_end;
  std::optional<numerics::OdeSolution<2>> sol;
};

class Integrator {
 public:
  Integrator(const ScalingCoefficients& k, double omega_trap, double rtol)
      : k_(k), w_(omega_trap) {
    opt_.rtol = rtol;
    opt_.atol = 1e-14;
  }

  // Advances `s` by `duration` with w^2(t) = w_trap^2 * f(time since start).
  template <class F>
  Piece advance(ScalingState& s, double duration, F fraction) const {
    Piece piece{s.t, s.t + duration, std::nullopt};
    if (!(duration > 0.0)) return piece;
    const double c4 = k_.c4;
    const double c3 = k_.c3;
    const double w = w_;
    auto rhs = [=](double tau, const State& y) {
      const double l = y[0];
      if (!(l > 0.0)) return State{NAN, NAN};
      const double l3 = l * l * l;
      return State{y[1], -fraction(tau / w) * l + c4 / (l3 * l) + c3 / l3};
    };
    try {
      piece.sol = numerics::integrate_ode<2>(rhs, 0.0, w * duration,
                                             State{s.lambda, s.lambda_dot / w}, opt_);
    } catch (const IntegrationFailure& e) {
      throw FocusCrossing("scaling factor collapsed (over-focused kick)",
                          s.t + e.last_good_time() / w);
    }
    const State end = piece.sol->final_state();
    s = {end[0], end[1] * w, s.t + duration};
    return piece;
  }

  // Kick of total length t_dkc with linear ramps of length t_r.
  std::vector<Piece> kick(ScalingState& s, double t_dkc, double t_r, double omega_kick) const {
    std::vector<Piece> pieces;
    if (!(t_dkc > 0.0)) return pieces;
    const double t_ramp = std::min(t_r, 0.5 * t_dkc);
    const KickSchedule sched(omega_kick, t_ramp, t_dkc);
    const double peak = (omega_kick * omega_kick) / (w_ * w_);
    if (t_ramp > 0.0) {
      pieces.push_back(advance(s, t_ramp, [=](double t) { return peak * t / t_ramp; }));
    }
    pieces.push_back(advance(s, sched.hold_end() - t_ramp, [=](double) { return peak; }));
    if (t_ramp > 0.0) {
      pieces.push_back(
          advance(s, t_ramp, [=](double t) { return peak * (t_ramp - t) / t_ramp; }));
    }
    return pieces;
  }

 private:
  ScalingCoefficients k_;
  double w_;
  numerics::OdeOptions opt_;
};

double lambda_at(const Piece& p, double t, double omega_trap) {
  if (!p.sol) return NAN;
  return (*p.sol)(omega_trap * (t - p.t_begin))[0];
}

}  // namespace

SequenceRunner::SequenceRunner(SequenceConfig cfg, const SpeciesPair& pair)
    : cfg_(std::move(cfg)), total_mass_(pair.total_mass()) {
  validate(cfg_.regime);
  if (!(cfg_.omega_trap > 0.0) || !std::isfinite(cfg_.omega_trap)) {
    throw InvalidInput("sequence: trap frequency must be positive");
  }
  if (cfg_.omega_kick == 0.0) cfg_.omega_kick = cfg_.omega_trap;
  for (double v : {cfg_.t_pre_tof, cfg_.t_dkc, cfg_.t_r, cfg_.t_tof, cfg_.trace_dt}) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInput("sequence: times must be >= 0");
  }
  if (!(cfg_.omega_kick > 0.0)) throw InvalidInput("sequence: kick frequency must be positive");
  if (!(cfg_.rtol > 0.0)) throw InvalidInput("sequence: rtol must be positive");

  omega_sq_0_ = cfg_.omega_trap * cfg_.omega_trap;
  coeff_ = scaling_coefficients(cfg_.regime, std::holds_alternative<Variational>(cfg_.regime)
                                                 ? oscillator_length(total_mass_, cfg_.omega_trap)
                                                 : 0.0);
  if (cfg_.sigma0_std) {
    if (!(*cfg_.sigma0_std > 0.0)) throw InvalidInput("sequence: sigma0 must be positive");
    sigma0_std_ = *cfg_.sigma0_std;
  } else {
    sigma0_std_ = standard_deviation_size(
        cfg_.regime, initial_size(cfg_.regime, pair, cfg_.omega_trap, cfg_.size));
  }

  const Integrator integ(coeff_, cfg_.omega_trap, cfg_.rtol);
  pre_kick_ = ScalingState{};
  integ.advance(pre_kick_, cfg_.t_pre_tof, [](double) { return 0.0; });
  E_i_ = energy(pre_kick_);
}

double SequenceRunner::energy(const ScalingState& s) const {
  return asymptotic_expansion_energy(s, coeff_, sigma0_std_, omega_sq_0_, total_mass_);
}

SequenceRunner::KickOutcome SequenceRunner::kick(double t_dkc) const {
  if (!(t_dkc >= 0.0) || !std::isfinite(t_dkc)) throw InvalidInput("kick: t_dkc must be >= 0");
  const Integrator integ(coeff_, cfg_.omega_trap, cfg_.rtol);
  ScalingState s = pre_kick_;
  integ.kick(s, t_dkc, cfg_.t_r, cfg_.omega_kick);
  const double e_f = energy(s);
  return {t_dkc, s, e_f, E_i_ / e_f};
}

SequenceResult SequenceRunner::run() const {
  const Integrator integ(coeff_, cfg_.omega_trap, cfg_.rtol);
  std::vector<Piece> pieces;
  ScalingState s{};
  pieces.push_back(integ.advance(s, cfg_.t_pre_tof, [](double) { return 0.0; }));

  SequenceResult out;
  out.sigma0_std = sigma0_std_;
  out.before_kick = s;
  out.sigma_at_kick = sigma0_std_ * s.lambda;
  for (Piece& p : integ.kick(s, cfg_.t_dkc, cfg_.t_r, cfg_.omega_kick)) {
    pieces.push_back(std::move(p));
  }
  out.after_kick = s;
  pieces.push_back(integ.advance(s, cfg_.t_tof, [](double) { return 0.0; }));
  out.E_i = E_i_;
  out.E_f = energy(out.after_kick);
  out.gain = out.E_i / out.E_f;

  // Trace: phase boundaries plus the uniform grid.
  std::vector<double> times{0.0};
  for (const Piece& p : pieces) times.push_back(p.t_end);
  if (cfg_.trace_dt > 0.0) {
    const double n = std::floor(s.t / cfg_.trace_dt);
    if (n > 1e7) throw InvalidInput("sequence: trace_dt too small");
    for (double k = 1.0; k <= n; k += 1.0) times.push_back(k * cfg_.trace_dt);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  for (double t : times) {
    double lambda = 1.0;
    if (t > 0.0) {
      const auto it = std::find_if(pieces.begin(), pieces.end(), [t](const Piece& p) {
        return p.sol && t <= p.t_end;
      });
      if (it == pieces.end()) continue;
      lambda = t == it->t_end ? (*it->sol).final_state()[0] : lambda_at(*it, t, cfg_.omega_trap);
    }
    out.t.push_back(t);
    out.lambda.push_back(lambda);
    out.sigma.push_back(sigma0_std_ * lambda);
  }
  return out;
}

SequenceResult run_sequence(const SequenceConfig& cfg, const SpeciesPair& pair) {
  return SequenceRunner(cfg, pair).run();
}

std::vector<double> linear_grid(double lo, double hi, std::size_t steps) {
  if (steps == 0) throw InvalidInput("linear_grid: need at least one step");
  if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo) {
    throw InvalidInput("linear_grid: need finite lo <= hi");
  }
  if (steps == 1) return {lo};
  std::vector<double> g(steps);
  const double step = (hi - lo) / static_cast<double>(steps - 1);
  for (std::size_t i = 0; i < steps; ++i) g[i] = lo + static_cast<double>(i) * step;
  g.back() = hi;
  return g;
}

std::vector<ScanPoint> gain_scan(const SequenceConfig& cfg, const SpeciesPair& pair,
                                 const std::vector<double>& t_dkc_grid, unsigned threads) {
  const SequenceRunner runner(cfg, pair);
  std::vector<ScanPoint> out(t_dkc_grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < out.size(); i = next++) {
      ScanPoint& p = out[i];
      p.t_dkc = t_dkc_grid[i];
      try {
        const auto k = runner.kick(p.t_dkc);
        p.gain = k.gain;
        p.E_f = k.E_f;
      } catch (const std::exception& e) {
        p.gain = p.E_f = std::numeric_limits<double>::quiet_NaN();
        p.error = e.what();
        if (p.error.empty()) p.error = "unknown error";
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(out.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

KickOptimum optimize_kick(const SequenceConfig& cfg, const SpeciesPair& pair,
                          numerics::Bracket bracket, double threshold, double xtol) {
  if (!(bracket.lo >= 0.0) || !(bracket.hi > bracket.lo)) {
    throw InvalidInput("optimize_kick: bracket must satisfy 0 <= lo < hi");
  }
  const SequenceRunner runner(cfg, pair);
  auto gain = [&](double t) { return runner.kick(t).gain; };

  const auto best = numerics::minimize_scalar([&](double t) { return -gain(t); }, bracket, xtol);
  KickOptimum out;
  out.t_opt = best.x;
  out.G_max = -best.value;
  out.threshold = threshold;
  if (threshold > out.G_max) return out;

  const double f_opt = out.G_max - threshold;
  if (f_opt == 0.0) {
    out.window = std::make_pair(out.t_opt, out.t_opt);
    return out;
  }
  auto excess = [&](double t) { return gain(t) - threshold; };
  const double step = 0.05 * (bracket.hi - bracket.lo);

  double inner = out.t_opt;
  double lo_edge = 0.0;
  for (;;) {
    const double outer = std::max(0.0, inner - step);
    if (excess(outer) < 0.0) {
      lo_edge = numerics::find_root(excess, {outer, inner}, xtol);
      break;
    }
    if (outer == 0.0) {
      lo_edge = 0.0;
      break;
    }
    inner = outer;
  }

  inner = out.t_opt;
  double hi_edge = 0.0;
  for (int i = 0;; ++i) {
    if (i == 1000) throw ConvergenceError("optimize_kick: upper threshold crossing not found");
    const double outer = inner + step;
    if (excess(outer) < 0.0) {
      hi_edge = numerics::find_root(excess, {inner, outer}, xtol);
      break;
    }
    inner = outer;
  }
  out.window = std::make_pair(lo_edge, hi_edge);
  return out;
}

}  // namespace dkc::scaling
