#pragma once

// Release -> free expansion -> delta kick -> free expansion, evaluated with
// the scaling laws of regime.hpp, plus gain scans and kick optimisation.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dkc/numerics/optimize.hpp"
#include "dkc/scaling/regime.hpp"
#include "dkc/species.hpp"

namespace dkc::scaling {

struct SequenceConfig {
  double omega_trap = 0.0;  // rad/s, trap the cloud is released from
  double t_pre_tof = 0.0;   // s
  double t_dkc = 0.0;       // s, 0 means no kick
  double t_r = 1e-6;        // s, clamped to t_dkc / 2
  double omega_kick = 0.0;  // rad/s peak during the kick; 0 reuses omega_trap
  double t_tof = 0.0;       // s of expansion recorded after the kick
  Regime regime = ThomasFermi{};
  SizeExtras size;
  /// Standard-deviation size at release; replaces initial_size when set.
  std::optional<double> sigma0_std;
  /// Spacing of the sigma trace. 0 records the phase boundaries only.
  double trace_dt = 0.0;
  double rtol = 1e-10;
};

struct SequenceResult {
  std::vector<double> t;       // s
  std::vector<double> sigma;   // m, standard deviation
  std::vector<double> lambda;
  double sigma0_std = 0.0;     // m
  double sigma_at_kick = 0.0;  // m, standard deviation when the kick starts
  ScalingState before_kick;
  ScalingState after_kick;
  double E_i = 0.0;  // K
  double E_f = 0.0;  // K
  double gain = 0.0;
};

/// Evaluates one configuration, caching everything up to the kick so that
/// many kick durations can share it. Thread-safe for concurrent kick() calls.
class SequenceRunner {
 public:
  SequenceRunner(SequenceConfig cfg, const SpeciesPair& pair);

  struct KickOutcome {
    double t_dkc;
    ScalingState after;
    double E_f;
    double gain;
  };

  /// Throws FocusCrossing if lambda collapses during the kick.
  KickOutcome kick(double t_dkc) const;
  SequenceResult run() const;

  const SequenceConfig& config() const noexcept { return cfg_; }
  const ScalingCoefficients& coefficients() const noexcept { return coeff_; }
  double sigma0_std() const noexcept { return sigma0_std_; }
  double E_i() const noexcept { return E_i_; }
  const ScalingState& pre_kick_state() const noexcept { return pre_kick_; }

 private:
  double energy(const ScalingState& s) const;

  SequenceConfig cfg_;
  double total_mass_;
  ScalingCoefficients coeff_;
  double omega_sq_0_;
  double sigma0_std_;
  ScalingState pre_kick_;
  double E_i_;
};

SequenceResult run_sequence(const SequenceConfig& cfg, const SpeciesPair& pair);

struct ScanPoint {
  double t_dkc = 0.0;
  double gain = 0.0;
  double E_f = 0.0;  // K
  std::string error;  // empty on success

  bool ok() const noexcept { return error.empty(); }
};

/// `steps` evenly spaced values from lo to hi inclusive (just lo for one step).
std::vector<double> linear_grid(double lo, double hi, std::size_t steps);

/// One kick per grid value, results in grid order. A failing point records
/// its error and NaN values; the scan carries on.
std::vector<ScanPoint> gain_scan(const SequenceConfig& cfg, const SpeciesPair& pair,
                                 const std::vector<double>& t_dkc_grid, unsigned threads = 1);

struct KickOptimum {
  double t_opt = 0.0;
  double G_max = 0.0;
  double threshold = 0.0;
  /// Range of t_dkc around t_opt with gain >= threshold; empty if the
  /// threshold exceeds G_max.
  std::optional<std::pair<double, double>> window;
};

/// Golden-section maximisation of the gain inside `bracket`, then bisection
/// for the threshold crossings on both sides of the optimum.
KickOptimum optimize_kick(const SequenceConfig& cfg, const SpeciesPair& pair,
                          numerics::Bracket bracket, double threshold, double xtol = 1e-11);

}  // namespace dkc::scaling
