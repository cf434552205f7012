#include "udw/amplitude.hpp"

#include "udw/errors.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace udw {
namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kSmallAlpha = 1e-6;

// integral_0^T t^n exp(i omega t) dt for n = 0..4
std::array<Complex, 5> oscillatory_moments(double omega, double T)
{
    std::array<Complex, 5> m{};
    const double x = omega * T;
    if (std::abs(x) <= 2.0) {
        for (int n = 0; n < 5; ++n) {
            Complex term = 1.0;
            Complex sum = 1.0 / (n + 1.0);
            for (int j = 1; j < 40; ++j) {
                term *= kI * x / static_cast<double>(j);
                sum += term / static_cast<double>(n + j + 1);
            }
            m[n] = std::pow(T, n + 1) * sum;
        }
        return m;
    }
    const Complex end{std::cos(x), std::sin(x)};
    const Complex inv = 1.0 / (kI * omega);
    m[0] = (end - 1.0) * inv;
    double tn = 1.0;
    for (int n = 1; n < 5; ++n) {
        tn *= T;
        m[n] = (tn * end - static_cast<double>(n) * m[n - 1]) * inv;
    }
    return m;
}

// i alpha integral_0^T exp(i omega t - i alpha t^2/2) / (omega - alpha t)^2 dt,
// expanded to second order in alpha.
Complex window_series(double omega, double alpha, double T)
{
    const auto m = oscillatory_moments(omega, T);
    const Complex first = 2.0 * m[1] / omega - 0.5 * kI * m[2];
    const Complex second = 3.0 * m[2] / (omega * omega) - kI * m[3] / omega - m[4] / 8.0;
    return kI * alpha / (omega * omega) * (m[0] + alpha * (first + alpha * second));
}

} // namespace

AmplitudeResult window_amplitude(double omega, double alpha, double duration)
{
    const double omega_end = omega - alpha * duration;
    if (!(omega > 0.0) || !(omega_end > 0.0))
        throw NonPositiveFrequency("window_amplitude: phase rate must be positive before and after the window");
    if (alpha == 0.0)
        return {0.0, AmplitudeBranch::SmallAlphaExpansion, 0.0};

    const double smallness = std::abs(alpha) * duration * std::max(duration, 1.0 / std::min(omega, omega_end));
    if (smallness <= kSmallAlpha) {
        const Complex v = window_series(omega, alpha, duration);
        return {v, AmplitudeBranch::SmallAlphaExpansion, 10.0 * smallness * smallness * smallness + 1e-15};
    }

    const Complex start = chirp_remainder(omega, alpha, 0.0);
    const Complex end = chirp_remainder(omega, alpha, duration);
    const double phase_end = omega * duration - 0.5 * alpha * duration * duration;
    const Complex v = Complex{std::cos(phase_end), std::sin(phase_end)} * end - start;
    const double scale = std::abs(start) + std::abs(end);
    const double mag = std::abs(v);
    const double rel = mag > 0.0 ? 1e-13 * scale / mag : 0.0;
    return {v, AmplitudeBranch::StableFaddeeva, rel};
}

AmplitudeResult time_integral_I(const PhotonCoords& coords, const DetectorConfig& det, const DriveConfig& drive)
{
    const FrequencySet f = frequencies(coords, det, drive);
    return window_amplitude(f.omega, drive.accel * coords.kz(), drive.t_accel);
}

AmplitudeResult time_integral_J(const Vec3& p, const PhotonCoords& coords, const DetectorConfig& det,
                                const DriveConfig& drive)
{
    const Vec3 kv = coords.vector();
    const double p_dot_k = p[0] * kv[0] + p[1] * kv[1] + p[2] * kv[2];
    if (det.mass.is_infinite())
        return time_integral_I(coords, det, drive);
    const FrequencySet f = frequencies(coords, det, drive, p_dot_k);
    return window_amplitude(*f.omega_m, drive.accel * coords.kz(), drive.t_accel);
}

OracleResult time_integral_oracle(double omega_eff, const PhotonCoords& coords, const DriveConfig& drive,
                                  const QuadratureConfig& quad)
{
    const double T = drive.t_accel;
    const double kz = coords.kz();
    const double alpha = drive.accel * kz;
    if (!(omega_eff > 0.0) || !(omega_eff - alpha * T > 0.0))
        throw NonPositiveFrequency("time_integral_oracle: phase rate must be positive");

    QuadratureConfig cfg = quad;
    cfg.rel_tol = 1e-12;
    cfg.abs_tol = 1e-16;
    auto integrand = [&](double t) {
        const double phase = omega_eff * t - kz * trajectory_z(t, drive);
        const double rate = omega_eff - alpha * t;
        return kI * alpha * Complex{std::cos(phase), std::sin(phase)} / (rate * rate);
    };
    auto hint = [&](double, double) { return omega_eff + std::abs(alpha) * T; };
    const ComplexIntegralEstimate r = integrate_1d_complex(integrand, 0.0, T, hint, cfg);
    if (!r.converged)
        throw QuadratureNoConvergence("time_integral_oracle: subdivision limit reached");
    return {r.value, r.est_error, r.evaluations};
}

double amplitude_norm2(double omega_m, const PhotonCoords& coords, const DriveConfig& drive)
{
    return std::norm(window_amplitude(omega_m, drive.accel * coords.kz(), drive.t_accel).value);
}

TaylorCoefficients taylor_coefficients(const PhotonCoords& coords, const DetectorConfig& det,
                                       const DriveConfig& drive)
{
    const double omega0 = det.gap + coords.k + 0.5 * coords.k * coords.k * det.mass.inverse();
    auto f = [&](double w) { return amplitude_norm2(w, coords, drive); };

    TaylorCoefficients c;
    c.j1 = f(omega0);
    if (drive.accel * coords.kz() == 0.0)
        return c;

    const double scale = std::min(omega0, 1.0 / drive.t_accel);
    const double h = 1e-3 * scale;
    auto second_difference = [&](double step) {
        return (f(omega0 + step) - 2.0 * c.j1 + f(omega0 - step)) / (step * step);
    };
    const double d1 = second_difference(h);
    const double d2 = second_difference(0.5 * h);
    const double d3 = second_difference(0.25 * h);
    const double r1 = (4.0 * d2 - d1) / 3.0;
    const double r2 = (4.0 * d3 - d2) / 3.0;
    const double spread = std::abs(r2 - r1);
    if (spread > 1e-4 * (std::abs(r2) + c.j1 / (scale * scale)))
        throw DerivativeUnstable("taylor_coefficients: Richardson levels disagree");
    c.j2 = 0.5 * r2;
    c.j2_error = 0.5 * spread;
    return c;
}

} // namespace udw
