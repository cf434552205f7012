#pragma once

#include "udw/amplitude.hpp"
#include "udw/kinematics.hpp"
#include "udw/quadrature.hpp"

#include <optional>
#include <vector>

namespace udw {

/// Gaussian centre-of-mass wavepacket of position width L.
struct WavepacketConfig {
    double width_L = 100.0;
    double sigma_guard = 3.5;

    void validate() const;
};

struct SpectrumPoint {
    double k = 0.0;
    std::optional<double> z;
    double density = 0.0;
};

struct RecoilPoint {
    double r = 0.0;
    double zeta = 0.0;
    double density = 0.0;
};

/// |phi(p)|^2 = (L^2 / 2 pi)^{3/2} exp(-p^2 L^2 / 2).
double wavepacket_density(const Vec3& p, double width_L);

/// q^2 k / (8 pi^2) |I|^2.
double p_u_density(double k, double z, const DetectorConfig& det, const DriveConfig& drive);

/// Angle-integrated infinite-mass density: integral over z in [-1, 1].
IntegralEstimate p_u_k(double k, const DetectorConfig& det, const DriveConfig& drive, const QuadratureConfig& quad);

/// Total infinite-mass excitation probability (semi-infinite k integral of p_u_k).
IntegralEstimate p_u_total(const DetectorConfig& det, const DriveConfig& drive, const QuadratureConfig& quad);

struct TaylorDensity {
    double value = 0.0;       // q^2 k / (8 pi^2) [J1 + k^2 J2 / (M L)^2]
    double leading = 0.0;     // the J1 term alone
    double correction = 0.0;  // the J2 term alone
};

/// Finite-mass (k, z) density from the first two Taylor coefficients of |J|^2
/// averaged over the Gaussian wavepacket. Reduces to p_u_density for an infinite mass.
TaylorDensity p_m_density_terms(double k, double z, const DetectorConfig& det, const DriveConfig& drive,
                                const WavepacketConfig& wp);

double p_m_density_kz(double k, double z, const DetectorConfig& det, const DriveConfig& drive,
                      const WavepacketConfig& wp);

/// Finite-mass (k, z) density without the Taylor reduction: Monte Carlo over the
/// wavepacket momentum p of q^2 k / (8 pi^2) |J(p - k)|^2, with the photon azimuth
/// drawn uniformly (or fixed by `fixed_phi`). Samples with a non-positive
/// omega_M or omega_M' are rejected and counted.
MonteCarloEstimate p_m_density_kz_exact(double k, double z, const DetectorConfig& det, const DriveConfig& drive,
                                        const WavepacketConfig& wp, const QuadratureConfig& quad,
                                        unsigned workers = 1, std::optional<double> fixed_phi = std::nullopt);

IntegralEstimate p_m_k(double k, const DetectorConfig& det, const DriveConfig& drive, const WavepacketConfig& wp,
                       const QuadratureConfig& quad);

IntegralEstimate p_m_total(const DetectorConfig& det, const DriveConfig& drive, const WavepacketConfig& wp,
                           const QuadratureConfig& quad);

/// Recoil density over recoil magnitude r and zeta = cos(angle(r, k)), from the
/// Taylor-reduced amplitude. The k integral is restricted to where the wavepacket
/// factor exp(-(r^2 + k^2 + 2 r k zeta) L^2 / 2) is within e^-50 of its maximum.
/// Normalised per r^2 dr dzeta: for a heavy detector its integral is P_U.
IntegralEstimate p_m_recoil_density(double r, double zeta, const DetectorConfig& det, const DriveConfig& drive,
                                    const WavepacketConfig& wp, const QuadratureConfig& quad);

/// Joint density for recoil momentum r_vec and photon momentum k_vec (no Taylor
/// reduction). J(r) is evaluated at omega_M = omega_0 - (r + k).k / M.
double p_m_joint(const Vec3& r_vec, const Vec3& k_vec, const DetectorConfig& det, const DriveConfig& drive,
                 const WavepacketConfig& wp);

struct ConvergenceRow {
    double gamma = 0.0;
    double mass = 0.0;
    double max_abs_dev = 0.0;
    double rel_dev_at_peak = 0.0;
    bool converged = true;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    double peak_k = 0.0;
    double peak_p_u = 0.0;
    bool strictly_decreasing = true;
    bool converged = true;
};

/// Scales the mass as base_mass * gamma at fixed acceleration (field scaled
/// alongside) and reports max over `k_grid` of |P_M(k) - P_U(k)| per gamma.
ConvergenceReport infinite_mass_limit_study(const std::vector<double>& gammas, double base_mass,
                                            const DetectorConfig& det, const DriveConfig& drive,
                                            const WavepacketConfig& wp, const std::vector<double>& k_grid,
                                            const QuadratureConfig& quad, unsigned workers = 1);

/// First window of the semi-infinite k integrals: 16 max(Omega, 1/T).
double initial_k_window(const DetectorConfig& det, const DriveConfig& drive);

} // namespace udw
