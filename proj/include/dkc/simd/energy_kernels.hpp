#pragma once

#include <span>
#include <string_view>

namespace dkc::simd {

enum class SimdLevel { Scalar, Avx2, Neon };

/// Best level supported by both the build and the running CPU.
SimdLevel detect_simd_level();
bool is_supported(SimdLevel level);
std::string_view to_string(SimdLevel level);

/// Per-sample constants of the three energy channels:
///   E_R = half_total_mass  * (w2 R^2 + Rdot^2)
///   E_r = half_reduced_mass * (relative_ratio_sq * w2 r^2 + rdot^2)
///   E_c = -reduced_mass * coupling_ratio_sq * w2 R r
/// where w2 = omega_mol^2(t).
struct EnergyCoefficients {
  double half_total_mass;
  double half_reduced_mass;
  double reduced_mass;
  double relative_ratio_sq;
  double coupling_ratio_sq;
};

struct EnergyInputs {
  std::span<const double> omega_mol_sq;
  std::span<const double> R;
  std::span<const double> R_dot;
  std::span<const double> r;
  std::span<const double> r_dot;
};

struct EnergyOutputs {
  std::span<double> E_R;
  std::span<double> E_r;
  std::span<double> E_c;
};

/// Evaluates the three channel energies sample by sample. All spans must have
/// the same length (InvalidInput otherwise).
void channel_energies(const EnergyInputs& in, const EnergyOutputs& out,
                      const EnergyCoefficients& k, SimdLevel level);

inline void channel_energies(const EnergyInputs& in, const EnergyOutputs& out,
                             const EnergyCoefficients& k) {
  channel_energies(in, out, k, detect_simd_level());
}

namespace detail {
void channel_energies_scalar(const EnergyInputs& in, const EnergyOutputs& out,
                             const EnergyCoefficients& k, std::size_t begin,
                             std::size_t end);
void channel_energies_avx2(const EnergyInputs& in, const EnergyOutputs& out,
                           const EnergyCoefficients& k);
void channel_energies_neon(const EnergyInputs& in, const EnergyOutputs& out,
                           const EnergyCoefficients& k);
}  // namespace detail

}  // namespace dkc::simd
