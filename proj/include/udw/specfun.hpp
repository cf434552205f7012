#pragma once

#include <complex>

namespace udw {

using Complex = std::complex<double>;

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz).
///
/// Upper half plane (Im z >= 0) is evaluated directly with relative error
/// around 1e-13 or better. The lower half plane goes through the reflection
/// w(z) = 2 exp(-z^2) - w(-z); OverflowRegime is thrown when exp(-z^2)
/// is not representable.
Complex faddeeva_w(Complex z);

/// w(z) - i / (sqrt(pi) z) for Im z >= 0, z != 0.
///
/// The leading asymptotic term is removed analytically in the continued
/// fraction region, so the result keeps full relative accuracy for large |z|
/// where a plain subtraction would cancel.
Complex faddeeva_w_remainder(Complex z);

/// erf(z) = 1 - exp(-z^2) w(iz). Accuracy degrades where |erf(z)| is much
/// smaller than |exp(-z^2) w(iz)|. Throws OverflowRegime like faddeeva_w.
Complex erf_complex(Complex z);

/// Below this value of |alpha| (t1 - t0)^2 the chirp segment is evaluated by
/// its two-term expansion in alpha.
inline constexpr double kChirpSmallAlpha = 1e-6;

/// S = integral over [t0, t1] of exp(i omega t - i alpha t^2 / 2) dt.
Complex chirp_segment(double omega, double alpha, double t0, double t1);

/// Remainder of the chirp antiderivative once its boundary term is removed.
///
/// Writing the antiderivative as F(t) = exp(i phi(t)) [1 / (i phi'(t)) + R(t)]
/// with phi(t) = omega t - alpha t^2 / 2, this returns R(t). Requires
/// alpha != 0 and phi'(t) != 0. R(t) is O(alpha / phi'^3) and is computed
/// without cancelling the boundary term.
Complex chirp_remainder(double omega, double alpha, double t);

} // namespace udw
