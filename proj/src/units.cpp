#include "dkc/units.hpp"

#include <string>

#include "dkc/error.hpp"

namespace dkc {
namespace {

enum class Dimension { Length, Mass, Energy, Frequency };

struct UnitInfo {
  Dimension dim;
  double to_base;  // factor taking the unit to its SI base
};

UnitInfo info(Unit u) {
  switch (u) {
    case Unit::BohrRadius:
      return {Dimension::Length, constants::bohr_radius};
    case Unit::Meter:
      return {Dimension::Length, 1.0};
    case Unit::AtomicMassUnit:
      return {Dimension::Mass, constants::atomic_mass_unit};
    case Unit::Kilogram:
      return {Dimension::Mass, 1.0};
    case Unit::Joule:
      return {Dimension::Energy, 1.0};
    case Unit::Kelvin:
      return {Dimension::Energy, constants::k_boltzmann};
    case Unit::Hertz:
      return {Dimension::Frequency, constants::two_pi};
    case Unit::RadianPerSecond:
      return {Dimension::Frequency, 1.0};
  }
  throw InvalidInput("unknown unit");
}

}  // namespace

double convert_units(double value, Unit from, Unit to) {
  const UnitInfo a = info(from);
  const UnitInfo b = info(to);
  if (a.dim != b.dim) throw InvalidInput("unsupported unit conversion");
  if (from == to) return value;
  // Single multiply or divide so that round trips stay within one ulp or two.
  if (a.to_base == 1.0) return value / b.to_base;
  if (b.to_base == 1.0) return value * a.to_base;
  return value * (a.to_base / b.to_base);
}

Unit parse_unit(std::string_view name) {
  if (name == "au" || name == "a.u.") return Unit::BohrRadius;
  if (name == "m") return Unit::Meter;
  if (name == "u") return Unit::AtomicMassUnit;
  if (name == "kg") return Unit::Kilogram;
  if (name == "J") return Unit::Joule;
  if (name == "K") return Unit::Kelvin;
  if (name == "Hz") return Unit::Hertz;
  if (name == "rad/s") return Unit::RadianPerSecond;
  throw InvalidInput("unknown unit '" + std::string(name) + "'");
}

}  // namespace dkc
