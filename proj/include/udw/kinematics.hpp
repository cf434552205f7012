#pragma once

#include "udw/quadrature.hpp"

#include <limits>
#include <optional>

namespace udw {

// Units throughout: hbar = c = 1. Inputs are in natural units (1/T, c/T,
// 1/(c^2 T), cT); with c = 1 these are plain numbers in units of T.

/// Acceleration `accel` along +z for t in [0, t_accel], free motion otherwise.
struct DriveConfig {
    double accel = 0.0;
    double t_accel = 1.0;

    /// accel >= 0 and t_accel > 0; throws ConfigError otherwise.
    void validate() const;
    /// Final drive velocity a T in units of c.
    [[nodiscard]] double final_speed() const { return accel * t_accel; }
    /// a T <= 0.01 c.
    [[nodiscard]] bool within_velocity_bound() const;
};

inline constexpr double kVelocityBound = 0.01;

/// Detector mass: a positive value or the infinite (prescribed trajectory) limit.
class Mass {
public:
    static Mass infinite() { return Mass(std::numeric_limits<double>::infinity()); }
    static Mass finite(double value);

    [[nodiscard]] bool is_infinite() const { return std::isinf(value_); }
    [[nodiscard]] double value() const { return value_; }
    /// 1/M, zero in the infinite limit.
    [[nodiscard]] double inverse() const { return is_infinite() ? 0.0 : 1.0 / value_; }

private:
    explicit Mass(double v) : value_(v) {}
    double value_;
};

struct DetectorConfig {
    double gap = 0.2;
    Mass mass = Mass::infinite();
    double coupling = 1.0;

    void validate() const;
};

/// Photon momentum in spherical coordinates about the acceleration axis.
struct PhotonCoords {
    double k = 0.0;
    double z = 0.0;  // cos(theta)
    double phi = 0.0;

    [[nodiscard]] double kz() const { return k * z; }
    [[nodiscard]] Vec3 vector() const;
    void validate() const;
};

/// z-component of the centre-of-mass displacement driven by the acceleration window.
double trajectory_z(double t, const DriveConfig& drive);

struct FrequencySet {
    double omega = 0.0;        // Omega + k
    double omega_prime = 0.0;  // omega - a k_z T
    // Finite-mass mode only.
    std::optional<double> omega0;        // omega + k^2 / 2M
    std::optional<double> omega_m;       // omega0 - p.k / M
    std::optional<double> omega_m_prime; // omega_m - a k_z T
};

/// Phase frequencies for a photon. `p_dot_k` selects finite-mass mode and
/// requires a finite detector mass. Throws NonPositiveFrequency when omega_m or
/// omega_m_prime is not strictly positive.
FrequencySet frequencies(const PhotonCoords& coords, const DetectorConfig& det, const DriveConfig& drive,
                         std::optional<double> p_dot_k = std::nullopt);

struct ValidationReport {
    double initial_speed = 0.0;  // 2 sigma sqrt(2) / (L M)
    double drive_speed = 0.0;    // a T
    double total_speed = 0.0;
    double bound = kVelocityBound;
    bool pass = false;
};

/// Non-relativistic guard for the wavepacket tails: initial speed of a
/// sigma-deviation momentum plus a T must stay within 0.01 c. An infinite mass
/// contributes no initial speed.
ValidationReport validate_nonrelativistic(const DetectorConfig& det, const DriveConfig& drive, double width_L,
                                          double sigma);

} // namespace udw
