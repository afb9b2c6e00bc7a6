#include "dkc/numerics/airy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dkc/error.hpp"

namespace dkc::numerics {
namespace {

constexpr double kAi0 = 0.355028053887817239260;
constexpr double kAiPrime0 = -0.258819403792806798405;
constexpr double kBi0 = 0.614926627446000735150;
constexpr double kBiPrime0 = 0.448288357353826357914;

// Region boundaries. The asymptotic series are truncated at their smallest
// term, whose size is roughly exp(-2 zeta); at |x| = 10 that is ~1e-18.
constexpr double kNegativeAsymptotic = -10.0;
constexpr double kNegativeSeries = -1.5;
constexpr double kAiSeriesMax = 2.0;
constexpr double kBiSeriesMax = 10.0;

constexpr double kTiny = 1e-18;

double zeta_of(double z) { return 2.0 / 3.0 * z * std::sqrt(z); }

// K_nu(z) e^z = int_0^inf exp(-z (cosh t - 1)) cosh(nu t) dt. The integrand
// is entire and decays double-exponentially, so the trapezoidal rule converges
// geometrically in 1/h.
double scaled_bessel_k(double nu, double z) {
  // The integrand's width shrinks like 1/sqrt(z); the trapezoid error behaves
  // as exp(-2 pi^2 / (z h^2)).
  const double h = std::min(0.1, 0.5 / std::sqrt(z));
  double sum = 0.5;  // t = 0 term
  for (int k = 1; k < 2000; ++k) {
    const double t = k * h;
    const double term = std::exp(-z * (std::cosh(t) - 1.0)) * std::cosh(nu * t);
    sum += term;
    if (term < kTiny * sum) break;
  }
  return h * sum;
}

}  // namespace

namespace detail {

AiryValues airy_maclaurin(double x) {
  const double x3 = x * x * x;
  // f and g are the two power-series solutions with f(0)=1, g'(0)=1.
  double f = 1.0, g = x, fp = 0.0, gp = 1.0;
  double ft = 1.0, gt = x, fpt = 0.0, gpt = 1.0;
  for (int k = 1; k < 400; ++k) {
    const double k3 = 3.0 * k;
    ft *= x3 / ((k3 - 1.0) * k3);
    gt *= x3 / (k3 * (k3 + 1.0));
    fpt = (k == 1) ? x * x / 2.0 : fpt * x3 / ((k3 - 3.0) * (k3 - 1.0));
    gpt *= x3 / ((k3 - 2.0) * k3);
    f += ft;
    g += gt;
    fp += fpt;
    gp += gpt;
    const double scale = std::abs(f) + std::abs(g) + std::abs(fp) + std::abs(gp);
    const double last = std::abs(ft) + std::abs(gt) + std::abs(fpt) + std::abs(gpt);
    if (last <= kTiny * scale) break;
  }
  const double c1 = kAi0;
  const double c2 = -kAiPrime0;
  const double s3 = std::numbers::sqrt3;
  return {c1 * f - c2 * g, c1 * fp - c2 * gp, s3 * (c1 * f + c2 * g),
          s3 * (c1 * fp + c2 * gp)};
}

AiryValues airy_taylor_continuation(double x) {
  // y'' = x y expanded about x0: c_n = (x0 c_{n-2} + c_{n-3}) / (n (n-1)).
  constexpr double kMaxStep = 0.25;
  double x0 = 0.0;
  double y[2] = {kAi0, kBi0};
  double yp[2] = {kAiPrime0, kBiPrime0};
  const int steps = static_cast<int>(std::ceil(std::abs(x) / kMaxStep));
  for (int s = 1; s <= steps; ++s) {
    const double x1 = (s == steps) ? x : x * (static_cast<double>(s) / steps);
    const double h = x1 - x0;
    for (int j = 0; j < 2; ++j) {
      double cm3 = 0.0, cm2 = y[j], cm1 = yp[j];
      double value = cm2 + cm1 * h;
      double deriv = cm1;
      double hp = h;  // h^(n-1)
      const double scale = std::abs(y[j]) + std::abs(yp[j]);
      int small_run = 0;
      for (int n = 2; n < 200; ++n) {
        const double c = (x0 * cm2 + cm3) / (n * (n - 1.0));
        const double dv = n * c * hp;
        hp *= h;
        const double vv = c * hp;
        value += vv;
        deriv += dv;
        cm3 = cm2;
        cm2 = cm1;
        cm1 = c;
        // The recurrence can produce isolated tiny terms; require three in a row.
        if (std::abs(vv) + std::abs(dv) <= kTiny * scale) {
          if (++small_run == 3) break;
        } else {
          small_run = 0;
        }
      }
      y[j] = value;
      yp[j] = deriv;
    }
    x0 = x1;
  }
  return {y[0], yp[0], y[1], yp[1]};
}

AiryValues airy_ai_bessel_k(double x) {
  if (!(x > 0.0)) throw DomainError("airy_ai_bessel_k requires x > 0");
  const double zeta = zeta_of(x);
  const double decay = std::exp(-zeta);
  const double pi = std::numbers::pi;
  const double ai = decay * std::sqrt(x / 3.0) / pi * scaled_bessel_k(1.0 / 3.0, zeta);
  const double aip = -decay * x / (pi * std::numbers::sqrt3) *
                     scaled_bessel_k(2.0 / 3.0, zeta);
  return {ai, aip, 0.0, 0.0};
}

AiryValues airy_asymptotic(double x) {
  const double z = std::abs(x);
  const double zeta = zeta_of(z);
  const double inv_zeta = 1.0 / zeta;
  const double z14 = std::sqrt(std::sqrt(z));
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);

  // u_k, v_k coefficients divided by zeta^k, accumulated as
  // alternating (x > 0, Ai), plain (x > 0, Bi) or split even/odd (x < 0).
  double u = 1.0, v = 1.0;  // u_k / zeta^k, v_k / zeta^k
  double su_alt = 1.0, sv_alt = 1.0, su = 1.0, sv = 1.0;
  double pu = 1.0, qu = 0.0, pv = 1.0, qv = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double kk = k;
    u *= (6.0 * kk - 5.0) * (6.0 * kk - 3.0) * (6.0 * kk - 1.0) /
         ((2.0 * kk - 1.0) * 216.0 * kk) * inv_zeta;
    v = -(6.0 * kk + 1.0) / (6.0 * kk - 1.0) * u;
    const double mag = std::abs(u) + std::abs(v);
    if (mag > prev) break;  // smallest term reached
    prev = mag;
    const double alt = (k % 2 == 0) ? 1.0 : -1.0;
    su_alt += alt * u;
    sv_alt += alt * v;
    su += u;
    sv += v;
    const double quarter_sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      pu += quarter_sign * u;
      pv += quarter_sign * v;
    } else {
      qu += quarter_sign * u;
      qv += quarter_sign * v;
    }
    if (mag < kTiny) break;
  }

  if (x < 0.0) {
    // theta = zeta - pi/4
    const double cz = std::cos(zeta);
    const double sz = std::sin(zeta);
    const double ct = (cz + sz) * std::numbers::sqrt2 / 2.0;
    const double st = (sz - cz) * std::numbers::sqrt2 / 2.0;
    const double amp = inv_sqrt_pi / z14;
    const double amp_d = inv_sqrt_pi * z14;
    return {amp * (ct * pu + st * qu), amp_d * (st * pv - ct * qv),
            amp * (-st * pu + ct * qu), amp_d * (ct * pv + st * qv)};
  }

  const double decay = std::exp(-zeta);
  const double growth = std::exp(zeta);
  AiryValues r{};
  r.ai = 0.5 * inv_sqrt_pi / z14 * decay * su_alt;
  r.ai_prime = -0.5 * inv_sqrt_pi * z14 * decay * sv_alt;
  r.bi = inv_sqrt_pi / z14 * growth * su;
  r.bi_prime = inv_sqrt_pi * z14 * growth * sv;
  return r;
}

}  // namespace detail

AiryValues airy(double x) {
  if (!std::isfinite(x)) throw DomainError("airy: argument must be finite");
  if (x < kNegativeAsymptotic) return detail::airy_asymptotic(x);
  if (x < kNegativeSeries) return detail::airy_taylor_continuation(x);
  if (x <= kAiSeriesMax) return detail::airy_maclaurin(x);

  AiryValues r = detail::airy_ai_bessel_k(x);
  const AiryValues b =
      (x <= kBiSeriesMax) ? detail::airy_maclaurin(x) : detail::airy_asymptotic(x);
  if (!std::isfinite(b.bi) || !std::isfinite(b.bi_prime)) {
    throw OverflowError("airy: Bi overflows at this argument");
  }
  r.bi = b.bi;
  r.bi_prime = b.bi_prime;
  return r;
}

}  // namespace dkc::numerics
