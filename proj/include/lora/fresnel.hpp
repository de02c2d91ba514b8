#pragma once

#include "lora/params.hpp"

namespace lora {

// C(x) = int_0^x cos(pi t^2 / 2) dt,  S(x) = int_0^x sin(pi t^2 / 2) dt.
struct FresnelPair {
  double c = 0.0;
  double s = 0.0;
};

// Absolute error below 1e-9 for all finite x (about 1e-15 in practice).
FresnelPair fresnel(double x);

// K(x) = C(x) + j S(x).
cplx fresnel_k(double x);

// K(x) - sgn(x) (1 + j)/2, evaluated without cancellation for large |x|,
// where it decays like 1/(pi |x|). sgn(0) = 0.
cplx fresnel_k_tail(double x);

namespace detail {

// Below this |x| the power series is used, above it the continued fraction.
inline constexpr double kFresnelSeam = 1.5;

FresnelPair fresnel_series(double x);
// Valid for x > 0; accurate from about x = 1 upward.
FresnelPair fresnel_continued_fraction(double x);
// K(x) - (1 + j)/2 from the continued fraction, x > 0.
cplx fresnel_cf_tail(double x);

}  // namespace detail
}  // namespace lora
