#include "udw/probability.hpp"

#include "udw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace udw {
namespace {

constexpr double kPi = std::numbers::pi;
// Half-width of the recoil k window in units of 1/L: exp(-W^2/2) = e^-50.
constexpr double kRecoilWindow = 10.0;

double emission_prefactor(const DetectorConfig& det)
{
    return det.coupling * det.coupling / (8.0 * kPi * kPi);
}

// Rate of change of the amplitude phase with z at fixed k.
double z_frequency(double k, const DriveConfig& drive)
{
    return drive.accel * k * drive.t_accel * drive.t_accel;
}

double k_frequency(const DriveConfig& drive)
{
    return drive.t_accel * (1.0 + drive.accel * drive.t_accel);
}

// Adds the inner integrals' error as a fraction of the outer value.
void fold_inner(IntegralEstimate& outer, double inner_rel_error, bool inner_converged)
{
    outer.est_error += inner_rel_error * std::abs(outer.value);
    outer.converged = outer.converged && inner_converged;
}

// Worst relative error of the inner integrals that sit above their absolute
// floor; the ones at the floor contribute at most abs_tol each.
struct InnerTracker {
    double floor = 0.0;
    double max_rel = 0.0;
    bool converged = true;

    void add(const IntegralEstimate& e)
    {
        converged = converged && e.converged;
        if (std::abs(e.value) > floor)
            max_rel = std::max(max_rel, e.est_error / std::abs(e.value));
    }
};

} // namespace

void WavepacketConfig::validate() const
{
    if (!(width_L > 0.0) || !std::isfinite(width_L))
        throw ConfigError("wavepacket.width must be > 0");
    if (!(sigma_guard >= 0.0) || !std::isfinite(sigma_guard))
        throw ConfigError("wavepacket.sigma_guard must be >= 0");
}

double initial_k_window(const DetectorConfig& det, const DriveConfig& drive)
{
    return 16.0 * std::max(det.gap, 1.0 / drive.t_accel);
}

double wavepacket_density(const Vec3& p, double width_L)
{
    const double p2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
    const double norm = std::pow(width_L * width_L / (2.0 * kPi), 1.5);
    return norm * std::exp(-0.5 * p2 * width_L * width_L);
}

double p_u_density(double k, double z, const DetectorConfig& det, const DriveConfig& drive)
{
    const PhotonCoords c{k, z};
    return emission_prefactor(det) * k * std::norm(time_integral_I(c, det, drive).value);
}

IntegralEstimate p_u_k(double k, const DetectorConfig& det, const DriveConfig& drive, const QuadratureConfig& quad)
{
    return integrate_1d([&](double z) { return p_u_density(k, z, det, drive); }, -1.0, 1.0,
                        [&](double, double) { return z_frequency(k, drive); }, quad);
}

IntegralEstimate p_u_total(const DetectorConfig& det, const DriveConfig& drive, const QuadratureConfig& quad)
{
    const QuadratureConfig inner = quad.tightened(0.1);
    InnerTracker tracker{inner.abs_tol};
    IntegralEstimate total = integrate_semi_infinite_k(
        [&](double k) {
            const IntegralEstimate e = p_u_k(k, det, drive, inner);
            tracker.add(e);
            return e.value;
        },
        initial_k_window(det, drive), [&](double, double) { return k_frequency(drive); }, quad);
    fold_inner(total, tracker.max_rel, tracker.converged);
    return total;
}

TaylorDensity p_m_density_terms(double k, double z, const DetectorConfig& det, const DriveConfig& drive,
                                const WavepacketConfig& wp)
{
    const double pre = emission_prefactor(det) * k;
    if (det.mass.is_infinite()) {
        const double v = p_u_density(k, z, det, drive);
        return {v, v, 0.0};
    }
    const TaylorCoefficients c = taylor_coefficients(PhotonCoords{k, z}, det, drive);
    const double ml = det.mass.value() * wp.width_L;
    TaylorDensity d;
    d.leading = pre * c.j1;
    d.correction = pre * k * k * c.j2 / (ml * ml);
    d.value = d.leading + d.correction;
    return d;
}

double p_m_density_kz(double k, double z, const DetectorConfig& det, const DriveConfig& drive,
                      const WavepacketConfig& wp)
{
    return p_m_density_terms(k, z, det, drive, wp).value;
}

MonteCarloEstimate p_m_density_kz_exact(double k, double z, const DetectorConfig& det, const DriveConfig& drive,
                                        const WavepacketConfig& wp, const QuadratureConfig& quad,
                                        unsigned workers, std::optional<double> fixed_phi)
{
    const double pre = emission_prefactor(det) * k;
    auto sample = [&](const Vec3& p, double aux) {
        const PhotonCoords c{k, z, fixed_phi ? *fixed_phi : 2.0 * kPi * aux};
        try {
            return pre * std::norm(time_integral_J(p, c, det, drive).value);
        } catch (const NonPositiveFrequency&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    return mc_gaussian_expectation(sample, wp.width_L, quad, workers);
}

IntegralEstimate p_m_k(double k, const DetectorConfig& det, const DriveConfig& drive, const WavepacketConfig& wp,
                       const QuadratureConfig& quad)
{
    return integrate_1d([&](double z) { return p_m_density_kz(k, z, det, drive, wp); }, -1.0, 1.0,
                        [&](double, double) { return z_frequency(k, drive); }, quad);
}

IntegralEstimate p_m_total(const DetectorConfig& det, const DriveConfig& drive, const WavepacketConfig& wp,
                           const QuadratureConfig& quad)
{
    const QuadratureConfig inner = quad.tightened(0.1);
    InnerTracker tracker{inner.abs_tol};
    IntegralEstimate total = integrate_semi_infinite_k(
        [&](double k) {
            const IntegralEstimate e = p_m_k(k, det, drive, wp, inner);
            tracker.add(e);
            return e.value;
        },
        initial_k_window(det, drive), [&](double, double) { return k_frequency(drive); }, quad);
    fold_inner(total, tracker.max_rel, tracker.converged);
    return total;
}

IntegralEstimate p_m_recoil_density(double r, double zeta, const DetectorConfig& det, const DriveConfig& drive,
                                    const WavepacketConfig& wp, const QuadratureConfig& quad)
{
    if (det.mass.is_infinite())
        throw std::invalid_argument("p_m_recoil_density: recoil is undefined for an infinite mass");
    if (!(r >= 0.0) || !(zeta >= -1.0 && zeta <= 1.0))
        throw std::domain_error("p_m_recoil_density: requires r >= 0 and zeta in [-1, 1]");

    const double L = wp.width_L;
    const double inv_m2 = det.mass.inverse() * det.mass.inverse();
    const double pre = L * L * L * det.coupling * det.coupling / (2.0 * std::pow(2.0 * kPi, 2.5));
    const double centre = -r * zeta;
    const double lo = std::max(0.0, centre - kRecoilWindow / L);
    const double hi = std::max(0.0, centre) + kRecoilWindow / L;

    const QuadratureConfig inner = quad.tightened(0.1);
    InnerTracker tracker{inner.abs_tol};
    auto integrand = [&](double k) {
        const double exponent = 0.5 * (r * r + k * k + 2.0 * r * k * zeta) * L * L;
        const double weight = k * std::exp(-exponent);
        if (weight == 0.0)
            return 0.0;
        const double a2 = (r * k * zeta + k * k) * (r * k * zeta + k * k) * inv_m2;
        const IntegralEstimate e = integrate_1d(
            [&](double z) {
                const TaylorCoefficients c = taylor_coefficients(PhotonCoords{k, z}, det, drive);
                return c.j1 + a2 * c.j2;
            },
            -1.0, 1.0, [&](double, double) { return z_frequency(k, drive); }, inner);
        tracker.add(e);
        return weight * e.value;
    };
    IntegralEstimate out = integrate_1d(integrand, lo, hi, quad);
    out.value *= pre;
    out.est_error *= pre;
    fold_inner(out, tracker.max_rel, tracker.converged);
    return out;
}

double p_m_joint(const Vec3& r_vec, const Vec3& k_vec, const DetectorConfig& det, const DriveConfig& drive,
                 const WavepacketConfig& wp)
{
    if (det.mass.is_infinite())
        throw std::invalid_argument("p_m_joint: requires a finite mass");
    const double k = std::sqrt(k_vec[0] * k_vec[0] + k_vec[1] * k_vec[1] + k_vec[2] * k_vec[2]);
    if (!(k > 0.0))
        throw std::domain_error("p_m_joint: photon momentum must be non-zero");
    const Vec3 p{r_vec[0] + k_vec[0], r_vec[1] + k_vec[1], r_vec[2] + k_vec[2]};
    const double p_dot_k = p[0] * k_vec[0] + p[1] * k_vec[1] + p[2] * k_vec[2];
    const PhotonCoords coords{k, k_vec[2] / k};
    const FrequencySet f = frequencies(coords, det, drive, p_dot_k);
    const double j2 = std::norm(window_amplitude(*f.omega_m, drive.accel * k_vec[2], drive.t_accel).value);
    const double pre = det.coupling * det.coupling / (4.0 * kPi * kPi * 4.0 * kPi * k);
    return pre * wavepacket_density(p, wp.width_L) * j2;
}

ConvergenceReport infinite_mass_limit_study(const std::vector<double>& gammas, double base_mass,
                                            const DetectorConfig& det, const DriveConfig& drive,
                                            const WavepacketConfig& wp, const std::vector<double>& k_grid,
                                            const QuadratureConfig& quad, unsigned workers)
{
    ConvergenceReport report;
    if (k_grid.empty())
        return report;

    std::vector<double> pu(k_grid.size());
    std::vector<double> pu_ok(k_grid.size());
    evaluate_indexed(k_grid.size(), workers,
                     [&](std::size_t i) {
                         const IntegralEstimate e = p_u_k(k_grid[i], det, drive, quad);
                         pu_ok[i] = e.converged ? 1.0 : 0.0;
                         return e.value;
                     },
                     pu);
    const auto peak = static_cast<std::size_t>(std::max_element(pu.begin(), pu.end()) - pu.begin());
    report.peak_k = k_grid[peak];
    report.peak_p_u = pu[peak];
    for (double ok : pu_ok)
        report.converged = report.converged && ok != 0.0;

    for (double gamma : gammas) {
        DetectorConfig scaled = det;
        scaled.mass = Mass::finite(base_mass * gamma);
        std::vector<double> pm;
        std::vector<double> pm_ok(k_grid.size());
        evaluate_indexed(k_grid.size(), workers,
                         [&](std::size_t i) {
                             const IntegralEstimate e = p_m_k(k_grid[i], scaled, drive, wp, quad);
                             pm_ok[i] = e.converged ? 1.0 : 0.0;
                             return e.value;
                         },
                         pm);
        ConvergenceRow row;
        row.gamma = gamma;
        row.mass = scaled.mass.value();
        for (std::size_t i = 0; i < k_grid.size(); ++i) {
            row.max_abs_dev = std::max(row.max_abs_dev, std::abs(pm[i] - pu[i]));
            row.converged = row.converged && pm_ok[i] != 0.0;
        }
        row.rel_dev_at_peak = std::abs(pm[peak] - pu[peak]) / pu[peak];
        report.converged = report.converged && row.converged;
        if (!report.rows.empty() && !(row.max_abs_dev < report.rows.back().max_abs_dev))
            report.strictly_decreasing = false;
        report.rows.push_back(row);
    }
    return report;
}

} // namespace udw
