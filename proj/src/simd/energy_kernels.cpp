#include "dkc/simd/energy_kernels.hpp"

#include "dkc/error.hpp"

namespace dkc::simd {

namespace detail {

void channel_energies_scalar(const EnergyInputs& in, const EnergyOutputs& out,
                             const EnergyCoefficients& k, std::size_t begin,
                             std::size_t end) {
  for (std::size_t i = begin; i < end; ++i) {
    const double w2 = in.omega_mol_sq[i];
    const double R = in.R[i];
    const double Rd = in.R_dot[i];
    const double r = in.r[i];
    const double rd = in.r_dot[i];
    out.E_R[i] = k.half_total_mass * (w2 * R * R + Rd * Rd);
    out.E_r[i] = k.half_reduced_mass * (k.relative_ratio_sq * w2 * r * r + rd * rd);
    out.E_c[i] = -(k.reduced_mass * k.coupling_ratio_sq) * w2 * R * r;
  }
}

}  // namespace detail

bool is_supported(SimdLevel level) {
  switch (level) {
    case SimdLevel::Scalar:
      return true;
    case SimdLevel::Avx2:
#if defined(__x86_64__) || defined(__i386__)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case SimdLevel::Neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

SimdLevel detect_simd_level() {
  static const SimdLevel level = [] {
    if (is_supported(SimdLevel::Avx2)) return SimdLevel::Avx2;
    if (is_supported(SimdLevel::Neon)) return SimdLevel::Neon;
    return SimdLevel::Scalar;
  }();
  return level;
}

std::string_view to_string(SimdLevel level) {
  switch (level) {
    case SimdLevel::Scalar:
      return "scalar";
    case SimdLevel::Avx2:
      return "avx2";
    case SimdLevel::Neon:
      return "neon";
  }
  return "unknown";
}

void channel_energies(const EnergyInputs& in, const EnergyOutputs& out,
                      const EnergyCoefficients& k, SimdLevel level) {
  const std::size_t n = in.omega_mol_sq.size();
  if (in.R.size() != n || in.R_dot.size() != n || in.r.size() != n ||
      in.r_dot.size() != n || out.E_R.size() != n || out.E_r.size() != n ||
      out.E_c.size() != n) {
    throw InvalidInput("channel_energies: span lengths differ");
  }
  if (!is_supported(level)) throw InvalidInput("channel_energies: SIMD level unavailable");
  switch (level) {
    case SimdLevel::Avx2:
      detail::channel_energies_avx2(in, out, k);
      return;
    case SimdLevel::Neon:
      detail::channel_energies_neon(in, out, k);
      return;
    case SimdLevel::Scalar:
      detail::channel_energies_scalar(in, out, k, 0, n);
      return;
  }
}

}  // namespace dkc::simd
