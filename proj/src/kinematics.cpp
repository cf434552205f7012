#include "udw/kinematics.hpp"

#include "udw/errors.hpp"

#include <cmath>
#include <string>

namespace udw {

void DriveConfig::validate() const
{
    if (!(accel >= 0.0) || !std::isfinite(accel))
        throw ConfigError("drive.accel must be >= 0");
    if (!(t_accel > 0.0) || !std::isfinite(t_accel))
        throw ConfigError("drive.duration must be > 0");
}

bool DriveConfig::within_velocity_bound() const
{
    return final_speed() <= kVelocityBound;
}

Mass Mass::finite(double value)
{
    if (!(value > 0.0) || !std::isfinite(value))
        throw ConfigError("detector mass must be positive and finite (or infinite)");
    return Mass(value);
}

void DetectorConfig::validate() const
{
    if (!(gap > 0.0) || !std::isfinite(gap))
        throw ConfigError("detector.gap must be > 0");
    if (!(coupling > 0.0) || !std::isfinite(coupling))
        throw ConfigError("detector.coupling must be > 0");
    if (!(mass.value() > 0.0))
        throw ConfigError("detector.mass must be > 0");
}

Vec3 PhotonCoords::vector() const
{
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {k * s * std::cos(phi), k * s * std::sin(phi), k * z};
}

void PhotonCoords::validate() const
{
    if (!(k > 0.0) || !std::isfinite(k))
        throw std::domain_error("photon momentum k must be > 0");
    if (!(z >= -1.0 && z <= 1.0))
        throw std::domain_error("photon z = cos(theta) must lie in [-1, 1]");
}

double trajectory_z(double t, const DriveConfig& drive)
{
    const double a = drive.accel;
    const double T = drive.t_accel;
    if (t <= 0.0)
        return 0.0;
    if (t <= T)
        return 0.5 * a * t * t;
    return 0.5 * a * T * (2.0 * t - T);
}

FrequencySet frequencies(const PhotonCoords& coords, const DetectorConfig& det, const DriveConfig& drive,
                         std::optional<double> p_dot_k)
{
    FrequencySet f;
    const double shift = drive.accel * coords.kz() * drive.t_accel;
    f.omega = det.gap + coords.k;
    f.omega_prime = f.omega - shift;
    if (!p_dot_k)
        return f;
    if (det.mass.is_infinite())
        throw std::invalid_argument("frequencies: p.k given for an infinite-mass detector");
    const double inv_m = det.mass.inverse();
    f.omega0 = f.omega + 0.5 * coords.k * coords.k * inv_m;
    f.omega_m = *f.omega0 - *p_dot_k * inv_m;
    f.omega_m_prime = *f.omega_m - shift;
    if (!(*f.omega_m > 0.0) || !(*f.omega_m_prime > 0.0))
        throw NonPositiveFrequency("omega_M or omega_M' is not positive: superluminal virtual velocity");
    return f;
}

ValidationReport validate_nonrelativistic(const DetectorConfig& det, const DriveConfig& drive, double width_L,
                                          double sigma)
{
    ValidationReport r;
    if (!det.mass.is_infinite())
        r.initial_speed = 2.0 * sigma * std::sqrt(2.0) / (width_L * det.mass.value());
    r.drive_speed = drive.final_speed();
    r.total_speed = r.initial_speed + r.drive_speed;
    r.pass = r.total_speed <= r.bound;
    return r;
}

} // namespace udw
