#pragma once

namespace dkc::numerics {

struct AiryValues {
  double ai;
  double ai_prime;
  double bi;
  double bi_prime;
};

/// Airy functions Ai, Bi and their derivatives at a real argument.
///
/// Throws DomainError for non-finite x and OverflowError when Bi(x) or
/// Bi'(x) is not representable (x above roughly 104).
AiryValues airy(double x);

// Individual evaluation strategies, exposed so their overlap bands can be
// tested against each other. `airy` picks between them by argument.
namespace detail {
/// Maclaurin series about 0.
AiryValues airy_maclaurin(double x);
/// Taylor continuation from x = 0 along the real axis (for x < 0).
AiryValues airy_taylor_continuation(double x);
/// Ai and Ai' from the modified Bessel K integral representation (x > 0).
/// bi fields are left at zero.
AiryValues airy_ai_bessel_k(double x);
/// Large-|x| asymptotic expansions (oscillatory for x < 0, exponential
/// for x > 0).
AiryValues airy_asymptotic(double x);
}  // namespace detail

}  // namespace dkc::numerics
