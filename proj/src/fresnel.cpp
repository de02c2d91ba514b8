#include "lora/fresnel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lora {
namespace detail {
namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 500;

}  // namespace

FresnelPair fresnel_series(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-150) return {x, 0.0};
  // C = sum_n (-1)^n (pi/2)^{2n} x^{4n+1} / ((2n)! (4n+1)),
  // S = sum_n (-1)^n (pi/2)^{2n+1} x^{4n+3} / ((2n+1)! (4n+3)).
  // term_k = (pi x^2 / 2)^k x / k!, alternating in pairs between C and S.
  const double w = 0.5 * kPi * ax * ax;
  double term = ax;
  double c = ax;
  double s = 0.0;
  for (int k = 1; k < kMaxIter; ++k) {
    term *= w / k;
    const double contrib = term / (2 * k + 1);
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      c += sign * contrib;
    } else {
      s += sign * contrib;
    }
    if (contrib < kEps * std::max(std::abs(c), std::abs(s))) break;
  }
  return x < 0 ? FresnelPair{-c, -s} : FresnelPair{c, s};
}

cplx fresnel_cf_tail(double x) {
  if (!(x > 0.0)) throw std::domain_error("fresnel continued fraction needs x > 0");
  // Modified Lentz evaluation of the complementary error function continued
  // fraction for erfc(sqrt(pi)/2 (1 - j) x).
  const double pix2 = kPi * x * x;
  constexpr double kTiny = std::numeric_limits<double>::min() / kEps;
  cplx b(1.0, -pix2);
  cplx cc = 1.0 / kTiny;
  cplx d = 1.0 / b;
  cplx h = d;
  int n = -1;
  for (int k = 2; k <= kMaxIter; ++k) {
    n += 2;
    const double a = -static_cast<double>(n) * (n + 1);
    b += 4.0;
    d = 1.0 / (a * d + b);
    cc = b + a / cc;
    const cplx del = cc * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < kEps) break;
  }
  h *= cplx(x, -x);
  // K(x) = (1+j)/2 [1 - exp(j pi x^2 / 2) h]. The phase is reduced from x^2
  // split into a high and low part to keep it accurate for large x.
  const double hi = std::floor(x);
  const double lo = x - hi;
  // x^2 / 4 in cycles of pi x^2 / 2 (period 4 in x^2).
  const double x2_hi = std::fmod(hi * hi, 4.0);
  const double x2 = x2_hi + 2.0 * hi * lo + lo * lo;
  const double cycles = std::fmod(x2, 4.0) / 4.0;
  const cplx e = std::polar(1.0, kTwoPi * cycles);
  return -cplx(0.5, 0.5) * e * h;
}

FresnelPair fresnel_continued_fraction(double x) {
  const cplx k = cplx(0.5, 0.5) + fresnel_cf_tail(x);
  return {k.real(), k.imag()};
}

}  // namespace detail

FresnelPair fresnel(double x) {
  if (!std::isfinite(x)) throw std::domain_error("fresnel: non-finite argument");
  const double ax = std::abs(x);
  if (ax <= detail::kFresnelSeam) return detail::fresnel_series(x);
  const FresnelPair r = detail::fresnel_continued_fraction(ax);
  return x < 0 ? FresnelPair{-r.c, -r.s} : r;
}

cplx fresnel_k(double x) {
  const FresnelPair r = fresnel(x);
  return {r.c, r.s};
}

cplx fresnel_k_tail(double x) {
  if (!std::isfinite(x)) throw std::domain_error("fresnel: non-finite argument");
  if (x == 0.0) return {0.0, 0.0};
  const double ax = std::abs(x);
  cplx t;
  if (ax <= detail::kFresnelSeam) {
    const FresnelPair r = detail::fresnel_series(ax);
    t = cplx(r.c - 0.5, r.s - 0.5);
  } else {
    t = detail::fresnel_cf_tail(ax);
  }
  return x < 0 ? -t : t;
}

}  // namespace lora
