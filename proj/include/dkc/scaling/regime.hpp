#pragma once

// Scaling laws for a cloud released from (and kicked by) an isotropic
// harmonic trap, sigma(t) = sigma(0) lambda(t). Every regime reduces to
//
//   lambda'' = -w^2(t) lambda + w^2(0) (c4 / lambda^4 + c3 / lambda^3)
//
// with regime-dependent constants c4 and c3.

#include <string>
#include <variant>

#include "dkc/species.hpp"

namespace dkc::scaling {

struct ThomasFermi {};

struct Variational {
  double N = 0.0;     // molecule number
  double a_dd = 0.0;  // molecule-molecule scattering length (m)
};

struct Hydrodynamic {
  double xi = 0.0;  // mean-field share of the energy, in [0, 1]
};

struct Thermal {};

using Regime = std::variant<ThomasFermi, Variational, Hydrodynamic, Thermal>;

/// Throws InvalidInput for out-of-range regime parameters.
void validate(const Regime& regime);
std::string regime_name(const Regime& regime);
/// Thomas-Fermi and Variational clouds are condensed; the others are not.
bool is_condensed(const Regime& regime);

struct ScalingCoefficients {
  double c4;
  double c3;
};

/// a_mol (oscillator length of the initial trap) is only used by the
/// variational correction.
ScalingCoefficients scaling_coefficients(const Regime& regime, double a_mol);

/// lambda'' for the given regime. Throws DomainError for lambda <= 0.
double scaling_rhs(const Regime& regime, double lambda, double omega_sq_t, double omega_sq_0,
                   double a_mol = 0.0);
double scaling_rhs(const ScalingCoefficients& k, double lambda, double omega_sq_t,
                   double omega_sq_0);

/// Square of the free-expansion speed reached as lambda -> infinity, from the
/// first integral of the trap-off equation.
double asymptotic_speed_sq(const ScalingCoefficients& k, double lambda, double lambda_dot,
                           double omega_sq_0);

struct ScalingState {
  double lambda = 1.0;
  double lambda_dot = 0.0;  // 1/s
  double t = 0.0;           // s
};

/// M (sigma0_std * lambda_dot_inf)^2 / k_B in kelvin. Throws
/// ConsistencyError if the first integral comes out negative.
double asymptotic_expansion_energy(const ScalingState& state, const ScalingCoefficients& k,
                                   double sigma0_std, double omega_sq_0, double total_mass);

/// Inputs needed by initial_size that the regime itself may not carry.
struct SizeExtras {
  double N = 0.0;            // used by ThomasFermi
  double a_dd = 0.0;         // m, used by ThomasFermi
  double temperature = 0.0;  // K, used by Hydrodynamic and Thermal
};

/// Initial size in the regime's own convention: the Thomas-Fermi radius for
/// condensed clouds, the Gaussian standard deviation otherwise.
/// Hydrodynamic with xi = 1 has no thermal width and is rejected.
double initial_size(const Regime& regime, const SpeciesPair& pair, double omega_trap,
                    const SizeExtras& extras);

/// Standard deviation of the density profile for a size returned by
/// initial_size (R_TF / sqrt(7) for condensed clouds).
double standard_deviation_size(const Regime& regime, double native_size);

/// xi = E_mf / (E_mf + k_B T) with E_mf = 4 pi hbar^2 a_dd n0 / (sqrt(2) M).
double mean_field_xi(double temperature, double peak_density, double a_dd, double total_mass);

}  // namespace dkc::scaling
