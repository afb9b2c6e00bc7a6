#include "dkc/simd/energy_kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#endif

namespace dkc::simd::detail {

#if defined(__x86_64__) || defined(__i386__)

// Mirrors the scalar kernel operation for operation (no FMA) so both paths
// round identically.
__attribute__((target("avx2"))) void channel_energies_avx2(const EnergyInputs& in,
                                                           const EnergyOutputs& out,
                                                           const EnergyCoefficients& k) {
  const std::size_t n = in.omega_mol_sq.size();
  const __m256d half_M = _mm256_set1_pd(k.half_total_mass);
  const __m256d half_mu = _mm256_set1_pd(k.half_reduced_mass);
  const __m256d rel = _mm256_set1_pd(k.relative_ratio_sq);
  const __m256d coup = _mm256_set1_pd(-(k.reduced_mass * k.coupling_ratio_sq));

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d w2 = _mm256_loadu_pd(in.omega_mol_sq.data() + i);
    const __m256d R = _mm256_loadu_pd(in.R.data() + i);
    const __m256d Rd = _mm256_loadu_pd(in.R_dot.data() + i);
    const __m256d r = _mm256_loadu_pd(in.r.data() + i);
    const __m256d rd = _mm256_loadu_pd(in.r_dot.data() + i);

    const __m256d pot_R = _mm256_mul_pd(_mm256_mul_pd(w2, R), R);
    const __m256d e_R = _mm256_mul_pd(half_M, _mm256_add_pd(pot_R, _mm256_mul_pd(Rd, Rd)));

    const __m256d pot_r = _mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(rel, w2), r), r);
    const __m256d e_r = _mm256_mul_pd(half_mu, _mm256_add_pd(pot_r, _mm256_mul_pd(rd, rd)));

    const __m256d e_c = _mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(coup, w2), R), r);

    _mm256_storeu_pd(out.E_R.data() + i, e_R);
    _mm256_storeu_pd(out.E_r.data() + i, e_r);
    _mm256_storeu_pd(out.E_c.data() + i, e_c);
  }
  channel_energies_scalar(in, out, k, i, n);
}

#else

void channel_energies_avx2(const EnergyInputs& in, const EnergyOutputs& out,
                           const EnergyCoefficients& k) {
  channel_energies_scalar(in, out, k, 0, in.omega_mol_sq.size());
}

#endif

}  // namespace dkc::simd::detail
