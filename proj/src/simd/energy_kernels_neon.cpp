#include "dkc/simd/energy_kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace dkc::simd::detail {

#if defined(__aarch64__)

void channel_energies_neon(const EnergyInputs& in, const EnergyOutputs& out,
                           const EnergyCoefficients& k) {
  const std::size_t n = in.omega_mol_sq.size();
  const float64x2_t half_M = vdupq_n_f64(k.half_total_mass);
  const float64x2_t half_mu = vdupq_n_f64(k.half_reduced_mass);
  const float64x2_t rel = vdupq_n_f64(k.relative_ratio_sq);
  const float64x2_t coup = vdupq_n_f64(-(k.reduced_mass * k.coupling_ratio_sq));

  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t w2 = vld1q_f64(in.omega_mol_sq.data() + i);
    const float64x2_t R = vld1q_f64(in.R.data() + i);
    const float64x2_t Rd = vld1q_f64(in.R_dot.data() + i);
    const float64x2_t r = vld1q_f64(in.r.data() + i);
    const float64x2_t rd = vld1q_f64(in.r_dot.data() + i);

    const float64x2_t pot_R = vmulq_f64(vmulq_f64(w2, R), R);
    const float64x2_t e_R = vmulq_f64(half_M, vaddq_f64(pot_R, vmulq_f64(Rd, Rd)));
    const float64x2_t pot_r = vmulq_f64(vmulq_f64(vmulq_f64(rel, w2), r), r);
    const float64x2_t e_r = vmulq_f64(half_mu, vaddq_f64(pot_r, vmulq_f64(rd, rd)));
    const float64x2_t e_c = vmulq_f64(vmulq_f64(vmulq_f64(coup, w2), R), r);

    vst1q_f64(out.E_R.data() + i, e_R);
    vst1q_f64(out.E_r.data() + i, e_r);
    vst1q_f64(out.E_c.data() + i, e_c);
  }
  channel_energies_scalar(in, out, k, i, n);
}

#else

void channel_energies_neon(const EnergyInputs& in, const EnergyOutputs& out,
                           const EnergyCoefficients& k) {
  channel_energies_scalar(in, out, k, 0, in.omega_mol_sq.size());
}

#endif

}  // namespace dkc::simd::detail
