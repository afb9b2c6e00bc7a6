#pragma once

#include <numbers>
#include <string_view>

namespace dkc {

// CODATA 2018 exact/recommended values, SI.
namespace constants {
inline constexpr double hbar = 1.054571817e-34;           // J s
inline constexpr double k_boltzmann = 1.380649e-23;       // J/K
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
inline constexpr double bohr_radius = 5.29177210903e-11;  // m
inline constexpr double two_pi = 2.0 * std::numbers::pi;
}  // namespace constants

enum class Unit {
  BohrRadius,
  Meter,
  AtomicMassUnit,
  Kilogram,
  Joule,
  Kelvin,
  Hertz,
  RadianPerSecond,
};

/// Multiplicative conversion between two units of the same dimension.
/// Supported: a.u. <-> m, u <-> kg, J <-> K (via k_B), Hz <-> rad/s.
/// Throws InvalidInput for any other pair.
double convert_units(double value, Unit from, Unit to);

/// Parses "au", "m", "u", "kg", "J", "K", "Hz", "rad/s".
Unit parse_unit(std::string_view name);

inline double hz_to_rad(double f_hz) { return constants::two_pi * f_hz; }
inline double joule_to_kelvin(double e) { return e / constants::k_boltzmann; }

}  // namespace dkc
