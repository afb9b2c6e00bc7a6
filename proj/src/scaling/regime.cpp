#include "dkc/scaling/regime.hpp"

#include <cmath>
#include <numbers>

#include "dkc/error.hpp"
#include "dkc/units.hpp"

namespace dkc::scaling {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

void validate(const Regime& regime) {
  std::visit(overloaded{
                 [](const ThomasFermi&) {},
                 [](const Variational& v) {
                   if (!(v.N >= 1.0) || !std::isfinite(v.N)) {
                     throw InvalidInput("variational regime: N must be at least 1");
                   }
                   if (!(v.a_dd > 0.0) || !std::isfinite(v.a_dd)) {
                     throw InvalidInput("variational regime: a_dd must be positive");
                   }
                 },
                 [](const Hydrodynamic& h) {
                   if (!(h.xi >= 0.0 && h.xi <= 1.0)) {
                     throw InvalidInput("hydrodynamic regime: xi must lie in [0, 1]");
                   }
                 },
                 [](const Thermal&) {},
             },
             regime);
}

std::string regime_name(const Regime& regime) {
  return std::visit(overloaded{
                        [](const ThomasFermi&) { return std::string("thomas-fermi"); },
                        [](const Variational&) { return std::string("variational"); },
                        [](const Hydrodynamic&) { return std::string("hydrodynamic"); },
                        [](const Thermal&) { return std::string("thermal"); },
                    },
                    regime);
}

bool is_condensed(const Regime& regime) {
  return std::holds_alternative<ThomasFermi>(regime) ||
         std::holds_alternative<Variational>(regime);
}

ScalingCoefficients scaling_coefficients(const Regime& regime, double a_mol) {
  validate(regime);
  return std::visit(
      overloaded{
          [](const ThomasFermi&) { return ScalingCoefficients{1.0, 0.0}; },
          [a_mol](const Variational& v) {
            if (!(a_mol > 0.0)) throw InvalidInput("variational regime needs the oscillator length");
            const double alpha = std::pow(0.5 * std::numbers::pi, 0.4) *
                                 std::pow(a_mol / (v.N * v.a_dd), 0.8);
            return ScalingCoefficients{1.0, alpha};
          },
          [](const Hydrodynamic& h) { return ScalingCoefficients{h.xi, 1.0 - h.xi}; },
          [](const Thermal&) { return ScalingCoefficients{0.0, 1.0}; },
      },
      regime);
}

double scaling_rhs(const ScalingCoefficients& k, double lambda, double omega_sq_t,
                   double omega_sq_0) {
  if (!(lambda > 0.0)) throw DomainError("scaling_rhs: lambda must be positive");
  const double l2 = lambda * lambda;
  const double l3 = l2 * lambda;
  return -omega_sq_t * lambda + omega_sq_0 * (k.c4 / (l3 * lambda) + k.c3 / l3);
}

double scaling_rhs(const Regime& regime, double lambda, double omega_sq_t, double omega_sq_0,
                   double a_mol) {
  return scaling_rhs(scaling_coefficients(regime, a_mol), lambda, omega_sq_t, omega_sq_0);
}

double asymptotic_speed_sq(const ScalingCoefficients& k, double lambda, double lambda_dot,
                           double omega_sq_0) {
  if (!(lambda > 0.0)) throw DomainError("asymptotic speed: lambda must be positive");
  const double l2 = lambda * lambda;
  return lambda_dot * lambda_dot +
         omega_sq_0 * (2.0 * k.c4 / (3.0 * l2 * lambda) + k.c3 / l2);
}

double asymptotic_expansion_energy(const ScalingState& state, const ScalingCoefficients& k,
                                   double sigma0_std, double omega_sq_0, double total_mass) {
  const double v2 = asymptotic_speed_sq(k, state.lambda, state.lambda_dot, omega_sq_0);
  if (!(v2 >= 0.0)) throw ConsistencyError("asymptotic expansion speed is imaginary");
  return total_mass * sigma0_std * sigma0_std * v2 / constants::k_boltzmann;
}

double initial_size(const Regime& regime, const SpeciesPair& pair, double omega_trap,
                    const SizeExtras& extras) {
  validate(regime);
  if (!(omega_trap > 0.0)) throw InvalidInput("initial_size: trap frequency must be positive");
  const double M = pair.total_mass();
  auto thomas_fermi_radius = [&](double N, double a_dd) {
    if (!(N >= 1.0) || !(a_dd > 0.0)) {
      throw InvalidInput("initial_size: Thomas-Fermi radius needs N >= 1 and a_dd > 0");
    }
    const double a_mol = oscillator_length(M, omega_trap);
    return a_mol * std::pow(15.0 * N * a_dd / a_mol, 0.2);
  };
  auto thermal_width = [&](double xi) {
    if (!(extras.temperature > 0.0)) {
      throw InvalidInput("initial_size: temperature must be positive for a thermal width");
    }
    if (!(xi < 1.0)) throw InvalidInput("initial_size: invalid regime for size (xi = 1)");
    return std::sqrt(constants::k_boltzmann * extras.temperature / M) /
           (omega_trap * std::sqrt(1.0 - xi));
  };
  return std::visit(
      overloaded{
          [&](const ThomasFermi&) { return thomas_fermi_radius(extras.N, extras.a_dd); },
          [&](const Variational& v) { return thomas_fermi_radius(v.N, v.a_dd); },
          [&](const Hydrodynamic& h) { return thermal_width(h.xi); },
          [&](const Thermal&) { return thermal_width(0.0); },
      },
      regime);
}

double standard_deviation_size(const Regime& regime, double native_size) {
  return is_condensed(regime) ? native_size / std::sqrt(7.0) : native_size;
}

double mean_field_xi(double temperature, double peak_density, double a_dd, double total_mass) {
  if (!(temperature >= 0.0) || !(peak_density >= 0.0) || !(a_dd >= 0.0) ||
      !(total_mass > 0.0)) {
    throw InvalidInput("mean_field_xi: inputs must be non-negative");
  }
  const double hbar = constants::hbar;
  const double e_mf =
      4.0 * std::numbers::pi * hbar * hbar * a_dd * peak_density / (std::sqrt(2.0) * total_mass);
  const double e_th = constants::k_boltzmann * temperature;
  if (e_mf + e_th == 0.0) throw DomainError("mean_field_xi: undefined for T = 0 and n0 = 0");
  return e_mf / (e_mf + e_th);
}

}  // namespace dkc::scaling
