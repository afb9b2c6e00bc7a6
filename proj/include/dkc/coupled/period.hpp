#pragma once

#include <cstddef>
#include <functional>

#include "dkc/numerics/optimize.hpp"

namespace dkc {

using PotentialFunction = std::function<double(double)>;

struct PeriodOptions {
  /// Samples used to locate the allowed region before bisection.
  std::size_t scan_points = 4096;
  double quad_tol = 1e-12;
};

/// Classical vibrational period sqrt(2 mu) * integral dr / sqrt(-E_b - V(r))
/// between the turning points, which are searched for inside `window`.
/// Throws DomainError if no bound region with two turning points lies in the
/// window.
double classical_period(const PotentialFunction& v_int, double binding_energy,
                        double reduced_mass, numerics::Bracket window,
                        const PeriodOptions& opt = {});

}  // namespace dkc
