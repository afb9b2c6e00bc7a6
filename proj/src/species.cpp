#include "dkc/species.hpp"

#include <cmath>
#include <numbers>

#include "dkc/error.hpp"
#include "dkc/units.hpp"

namespace dkc {

SpeciesPair::SpeciesPair(double m_light_kg, double m_heavy_kg, double p)
    : m_light_(m_light_kg), m_heavy_(m_heavy_kg), p_(p) {
  if (!(m_light_ > 0.0) || !(m_heavy_ > 0.0) || !std::isfinite(m_light_) ||
      !std::isfinite(m_heavy_)) {
    throw InvalidInput("species masses must be positive and finite");
  }
  if (!(p_ > 0.0) || !std::isfinite(p_)) {
    throw InvalidInput("polarizability ratio must be positive and finite");
  }
}

SpeciesPair SpeciesPair::potassium_rubidium(double p) {
  return {kMassK41_u * constants::atomic_mass_unit,
          kMassRb87_u * constants::atomic_mass_unit, p};
}

double relative_frequency_ratio_sq(const SpeciesPair& pair) {
  const double g = pair.mass_ratio();
  const double p = pair.p();
  return (g * g + p) / ((p + 1.0) * g);
}

double coupling_frequency_ratio_sq(const SpeciesPair& pair) {
  // m_light (gamma - p) rather than m_heavy - p m_light: vanishes exactly at
  // p = magic_polarizability_ratio(pair).
  return pair.m_light() * (pair.mass_ratio() - pair.p()) /
         ((pair.p() + 1.0) * pair.reduced_mass());
}

TrapFrequencies derived_frequencies(const SpeciesPair& pair, double omega_mol) {
  if (!(omega_mol > 0.0) || !std::isfinite(omega_mol)) {
    throw InvalidInput("trap frequency must be positive and finite");
  }
  const double w2 = omega_mol * omega_mol;
  const double M = pair.total_mass();
  const double p = pair.p();
  // m_i omega_i^2 / alpha_i is common to both atoms and equals
  // M omega_mol^2 / (alpha_light + alpha_heavy).
  const double w2_light = M * w2 / (pair.m_light() * (1.0 + p));
  const double w2_heavy = p * M * w2 / (pair.m_heavy() * (1.0 + p));

  TrapFrequencies f{};
  f.omega_mol = omega_mol;
  f.omega_r = omega_mol * std::sqrt(relative_frequency_ratio_sq(pair));
  f.omega_c_sq = w2 * coupling_frequency_ratio_sq(pair);
  f.omega_light = std::sqrt(w2_light);
  f.omega_heavy = std::sqrt(w2_heavy);
  return f;
}

double magic_polarizability_ratio(const SpeciesPair& pair) {
  return pair.mass_ratio();
}

double oscillator_length(double total_mass, double omega_mol) {
  return std::sqrt(constants::hbar / (total_mass * omega_mol));
}

double binding_energy(double reduced_mass, double scattering_length) {
  return constants::hbar * constants::hbar /
         (2.0 * reduced_mass * scattering_length * scattering_length);
}

double thin_lens_duration(double omega_mol, double t_pre_tof) {
  return 1.0 / (std::sqrt(2.0 * std::numbers::pi) * omega_mol * omega_mol *
                t_pre_tof);
}

}  // namespace dkc
