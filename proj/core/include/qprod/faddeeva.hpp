#pragma once

#include <complex>

namespace qprod {

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz), entire.
///
/// Rational-series evaluation on the upper half plane (Weideman-style,
/// 64 terms) with a continued fraction for large |z|; the lower half plane
/// uses the reflection w(z) = 2 exp(-z^2) - w(-z), which overflows to inf
/// exactly where w itself does. Target relative error 1e-12 for |z| <= 30.
std::complex<double> faddeeva_w(std::complex<double> z);

/// Scaled complementary error function erfcx(t) = exp(t^2) erfc(t) = w(it).
std::complex<double> erfcx_complex(std::complex<double> t);

} // namespace qprod
