#pragma once

#include "udw/kinematics.hpp"
#include "udw/quadrature.hpp"
#include "udw/specfun.hpp"

#include <cstddef>

namespace udw {

enum class AmplitudeBranch { StableFaddeeva, SmallAlphaExpansion };

struct AmplitudeResult {
    Complex value;
    AmplitudeBranch branch = AmplitudeBranch::StableFaddeeva;
    double est_error = 0.0;  // relative
};

/// Time integral of exp(i Phi(t)) over the whole real line for a phase whose
/// rate is `omega` before the window, omega - alpha t inside [0, duration] and
/// omega - alpha duration afterwards. Distributional delta terms are dropped,
/// which is exact for positive rates at both ends.
///
/// Evaluated as exp(i phi(T)) R(T) - R(0) with R the chirp remainder, so the
/// O(alpha) result never comes from cancelling O(1/omega) boundary terms. For
/// |alpha| T max(T, 1/omega') <= 1e-6 a second-order series in alpha is used.
/// Throws NonPositiveFrequency when omega or omega - alpha T is not positive.
AmplitudeResult window_amplitude(double omega, double alpha, double duration);

/// Infinite-mass amplitude integral for a prescribed accelerated trajectory.
AmplitudeResult time_integral_I(const PhotonCoords& coords, const DetectorConfig& det, const DriveConfig& drive);

/// Finite-mass amplitude integral for initial centre-of-mass momentum p (the
/// photon momentum vector is taken from coords, including phi).
AmplitudeResult time_integral_J(const Vec3& p, const PhotonCoords& coords, const DetectorConfig& det,
                                const DriveConfig& drive);

struct OracleResult {
    Complex value;
    double est_error = 0.0;  // absolute
    std::size_t evaluations = 0;
};

/// Reference value of the amplitude integral by adaptive quadrature over the
/// acceleration window; the free-motion tails are exact and are folded into the
/// window integrand by parts, leaving
///   i alpha * integral_0^T exp(i omega t - i k_z f(t)) / (omega - alpha t)^2 dt.
/// Runs at rel 1e-12 / abs 1e-16 whatever the tolerances in `quad`; throws
/// QuadratureNoConvergence if the subdivision limit is hit.
OracleResult time_integral_oracle(double omega_eff, const PhotonCoords& coords, const DriveConfig& drive,
                                  const QuadratureConfig& quad);

struct TaylorCoefficients {
    double j1 = 0.0;        // |J|^2 at omega_M = omega_0
    double j2 = 0.0;        // (1/2) d^2|J|^2 / dA^2 at A = 0, A = p.k / M
    double j2_error = 0.0;  // absolute, from the two Richardson levels
};

/// Zeroth and second Taylor coefficients of |J|^2 in A = p.k / M.
///
/// Central second differences in omega with h = 1e-3 min(omega_0, 1/T), three
/// step halvings and one Richardson level. Throws DerivativeUnstable when the two
/// Richardson values differ by more than 1e-4 of |f''| + |J|^2 / s^2,
/// s = min(omega_0, 1/T).
TaylorCoefficients taylor_coefficients(const PhotonCoords& coords, const DetectorConfig& det,
                                       const DriveConfig& drive);

/// |J|^2 as a function of the effective frequency omega_M for fixed photon
/// coordinates (alpha = a k_z).
double amplitude_norm2(double omega_m, const PhotonCoords& coords, const DriveConfig& drive);

} // namespace udw
