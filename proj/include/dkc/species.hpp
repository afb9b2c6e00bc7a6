#pragma once

// Species data and the trap-frequency algebra that links the atomic
// polarizabilities and masses to the molecular, relative and coupling
// frequencies of a harmonic, isotropic optical trap.

namespace dkc {

/// Two-atom species pair forming the molecule. `p` is the ratio of the heavy
/// atom's dynamic polarizability to the light atom's.
class SpeciesPair {
 public:
  SpeciesPair(double m_light_kg, double m_heavy_kg, double p);

  /// 41K + 87Rb with the given polarizability ratio.
  static SpeciesPair potassium_rubidium(double p = 1.10);

  double m_light() const noexcept { return m_light_; }
  double m_heavy() const noexcept { return m_heavy_; }
  double p() const noexcept { return p_; }

  double total_mass() const noexcept { return m_light_ + m_heavy_; }
  double reduced_mass() const noexcept { return m_light_ * m_heavy_ / total_mass(); }
  /// gamma = m_heavy / m_light.
  double mass_ratio() const noexcept { return m_heavy_ / m_light_; }

  SpeciesPair with_p(double p) const { return {m_light_, m_heavy_, p}; }

 private:
  double m_light_;
  double m_heavy_;
  double p_;
};

inline constexpr double kMassK41_u = 40.96182526;
inline constexpr double kMassRb87_u = 86.909180531;
inline constexpr double kPolarizabilityRatio2000nm = 1.10;

struct TrapFrequencies {
  double omega_mol;    // rad/s
  double omega_r;      // rad/s
  double omega_c_sq;   // rad^2/s^2, negative above the magic ratio
  double omega_light;  // rad/s
  double omega_heavy;  // rad/s
};

/// Relative, coupling and per-atom frequencies for a molecular trap frequency.
TrapFrequencies derived_frequencies(const SpeciesPair& pair, double omega_mol);

/// omega_r^2 / omega_mol^2, independent of the trap depth.
double relative_frequency_ratio_sq(const SpeciesPair& pair);
/// omega_c^2 / omega_mol^2.
double coupling_frequency_ratio_sq(const SpeciesPair& pair);

/// Polarizability ratio at which centre-of-mass and relative motion decouple.
double magic_polarizability_ratio(const SpeciesPair& pair);

/// Harmonic oscillator length sqrt(hbar / (M omega)).
double oscillator_length(double total_mass, double omega_mol);

/// hbar^2 / (2 mu a^2).
double binding_energy(double reduced_mass, double scattering_length);

/// Impulse-approximation estimate of the kick duration,
/// 1 / (sqrt(2 pi) omega^2 t_pre_tof).
double thin_lens_duration(double omega_mol, double t_pre_tof);

}  // namespace dkc
