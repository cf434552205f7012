#include "udw/amplitude.hpp"
#include "udw/errors.hpp"
#include "udw/specfun.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace udw;

namespace {

const DetectorConfig kDet{0.2, Mass::infinite(), 1.0};
const DriveConfig kDrive{8e-3, 1.0};
const Complex kI{0.0, 1.0};

double rel_dev(Complex got, Complex want)
{
    return std::abs(got - want) / std::abs(want);
}

DetectorConfig with_mass(double m, double gap = 0.2)
{
    return {gap, Mass::finite(m), 1.0};
}

} // namespace

TEST_CASE("time_integral_I: transverse and inertial nulls")
{
    for (double k : {0.1, 3.0, 60.0}) {
        CHECK(time_integral_I({k, 0.0}, kDet, kDrive).value == Complex(0.0, 0.0));
        CHECK(time_integral_I({k, 0.7}, kDet, {0.0, 1.0}).value == Complex(0.0, 0.0));
    }
    // The literal tails + middle segment cancel to rounding at z = 0.
    const double omega = 3.2;
    const Complex literal = 1.0 / (kI * omega) - std::exp(kI * omega) / (kI * omega) + chirp_segment(omega, 0.0, 0.0, 1.0);
    CHECK(std::abs(literal) <= 1e-15);
}

TEST_CASE("time_integral_I: literal transcriptions agree at moderate parameters")
{
    // Parameters where neither form loses accuracy to cancellation or overflow.
    const DriveConfig drive{0.5, 1.0};
    for (auto [k, z] : {std::pair{1.0, 1.0}, std::pair{2.5, -0.6}, std::pair{0.8, 0.3}}) {
        const PhotonCoords c{k, z};
        const FrequencySet f = frequencies(c, kDet, drive);
        const double alpha = drive.accel * c.kz();
        const double T = drive.t_accel;
        const Complex tails = 1.0 / (kI * f.omega) - std::exp(kI * T * (f.omega_prime + alpha * T / 2.0)) / (kI * f.omega_prime);
        const Complex via_segment = tails + chirp_segment(f.omega, alpha, 0.0, T);

        // Completed square with erf of complex argument, principal square root.
        const Complex b = std::sqrt(2.0 * kI * alpha);
        const Complex pre = std::sqrt(std::numbers::pi) / b * std::exp(kI * f.omega * f.omega / (2.0 * alpha));
        const Complex via_erf = tails + pre * (erf_complex(kI * f.omega / b) - erf_complex(kI * f.omega_prime / b));

        const Complex closed = time_integral_I(c, kDet, drive).value;
        CAPTURE(k);
        CAPTURE(z);
        CHECK(rel_dev(via_segment, closed) <= 1e-10);
        CHECK(rel_dev(via_erf, closed) <= 1e-9);
    }
}

TEST_CASE("time_integral_I: raw quadrature of the window plus exact tails")
{
    // Direct form of the oracle, usable where |I| is not tiny next to 1/omega.
    const DriveConfig drive{0.5, 1.0};
    QuadratureConfig q;
    q.rel_tol = 1e-13;
    q.abs_tol = 1e-17;
    for (auto [k, z] : {std::pair{1.0, 1.0}, std::pair{2.5, -0.6}}) {
        const PhotonCoords c{k, z};
        const FrequencySet f = frequencies(c, kDet, drive);
        auto window = [&](double t) { return std::exp(kI * (f.omega * t - c.kz() * trajectory_z(t, drive))); };
        const Complex middle =
            integrate_1d_complex(window, 0.0, 1.0, [&](double, double) { return f.omega; }, q).value;
        const double phase_T = f.omega - c.kz() * trajectory_z(1.0, drive);
        const Complex raw = 1.0 / (kI * f.omega) + middle - std::exp(kI * phase_T) / (kI * f.omega_prime);
        CHECK(rel_dev(raw, time_integral_I(c, kDet, drive).value) <= 1e-11);
        CHECK(rel_dev(raw, time_integral_oracle(f.omega, c, drive, q).value) <= 1e-11);
    }
}

TEST_CASE("time_integral_oracle: nulls")
{
    const QuadratureConfig q;
    CHECK(std::abs(time_integral_oracle(1.0, {0.8, 0.5}, {0.0, 1.0}, q).value) <= 1e-14);
    CHECK(std::abs(time_integral_oracle(1.0, {0.8, 0.0}, kDrive, q).value) <= 1e-14);
    CHECK_THROWS_AS(time_integral_oracle(0.0, {0.8, 0.5}, kDrive, q), NonPositiveFrequency);
}

TEST_CASE("time_integral_oracle: agrees with a fixed composite Gauss-Legendre rule")
{
    // Five-point Gauss-Legendre on equal panels, 10x denser than the oracle's own panels.
    constexpr double x[5] = {0.0, 0.538469310105683091, -0.538469310105683091, 0.906179845938663993, -0.906179845938663993};
    constexpr double w[5] = {0.568888888888888889, 0.478628670499366468, 0.478628670499366468, 0.236926885056189088,
                             0.236926885056189088};
    const QuadratureConfig q;
    for (auto [k, z] : {std::pair{0.4, 0.9}, std::pair{12.0, -0.3}, std::pair{55.0, 1.0}}) {
        const PhotonCoords c{k, z};
        const FrequencySet f = frequencies(c, kDet, kDrive);
        const OracleResult oracle = time_integral_oracle(f.omega, c, kDrive, q);
        const double alpha = kDrive.accel * c.kz();
        auto g = [&](double t) {
            const double rate = f.omega - alpha * t;
            return kI * alpha * std::exp(kI * (f.omega * t - c.kz() * trajectory_z(t, kDrive))) / (rate * rate);
        };
        const auto panels = std::max<std::size_t>(10 * (oracle.evaluations / 15), 200);
        const double h = 1.0 / static_cast<double>(panels);
        Complex sum = 0.0;
        for (std::size_t p = 0; p < panels; ++p) {
            const double mid = (static_cast<double>(p) + 0.5) * h;
            for (int j = 0; j < 5; ++j)
                sum += w[j] * g(mid + 0.5 * h * x[j]);
        }
        sum *= 0.5 * h;
        CAPTURE(k);
        CHECK(rel_dev(sum, oracle.value) <= 1e-12);
        CHECK(oracle.est_error <= 1e-12 * std::abs(oracle.value) + 1e-16);
    }
}

TEST_CASE("time_integral_I: matches the oracle on a sampled grid")
{
    const QuadratureConfig q;
    for (double k = 0.1; k <= 60.0; k += 2.9)
        for (double z = -1.0; z <= 1.0001; z += 0.25) {
            const PhotonCoords c{k, z};
            const AmplitudeResult a = time_integral_I(c, kDet, kDrive);
            const Complex oracle = time_integral_oracle(frequencies(c, kDet, kDrive).omega, c, kDrive, q).value;
            if (std::abs(c.kz()) * kDrive.accel < 1e-8) {
                CHECK(std::abs(a.value - oracle) <= 1e-12);
                continue;
            }
            CAPTURE(k);
            CAPTURE(z);
            CHECK(rel_dev(a.value, oracle) <= 1e-8);
            CHECK(a.est_error >= 0.0);
        }
}

TEST_CASE("time_integral_I: series branch and its seam")
{
    // |alpha| T max(T, 1/omega') = 1e-6 sits at the seam.
    const double omega = 2.0;
    for (double f : {0.5, 0.999, 1.001, 2.0}) {
        const double alpha = f * 1e-6;
        const AmplitudeResult a = window_amplitude(omega, alpha, 1.0);
        CHECK(a.branch == (f < 1.0 ? AmplitudeBranch::SmallAlphaExpansion : AmplitudeBranch::StableFaddeeva));
        const PhotonCoords c{omega - 0.2, alpha / (kDrive.accel * (omega - 0.2))};
        const Complex oracle = time_integral_oracle(omega, c, kDrive, {}).value;
        CHECK(rel_dev(a.value, oracle) <= 1e-10);
    }
}

TEST_CASE("time_integral_I: first-order vanishing in a, azimuthal invariance")
{
    const PhotonCoords c{2.0, 0.8};
    const double big = std::abs(time_integral_I(c, kDet, {1e-3, 1.0}).value);
    const double slope = big / 1e-3;
    for (double a : {1e-5, 1e-4, 1e-3})
        CHECK(std::abs(time_integral_I(c, kDet, {a, 1.0}).value) <= slope * a * (1.0 + 1e-6));
    for (double phi : {0.0, 1.0, 4.0})
        CHECK(time_integral_I({2.0, 0.8, phi}, kDet, kDrive).value == time_integral_I(c, kDet, kDrive).value);
}

TEST_CASE("time_integral_J: limits and gap shift")
{
    const Vec3 zero{0.0, 0.0, 0.0};
    for (double k : {0.1, 0.5, 1.0, 3.0, 6.0, 10.0})
        for (double z : {-1.0, -0.4, 0.3, 1.0}) {
            const PhotonCoords c{k, z};
            const Complex inf = time_integral_I(c, kDet, kDrive).value;
            CAPTURE(k);
            CAPTURE(z);
            CHECK(rel_dev(time_integral_J(zero, c, with_mass(1e9), kDrive).value, inf) <= 1e-6);

            const double shifted_gap = 0.2 + k * k / 20.0;
            const Complex shifted = time_integral_I(c, {shifted_gap, Mass::infinite(), 1.0}, kDrive).value;
            CHECK(rel_dev(time_integral_J(zero, c, with_mass(10.0), kDrive).value, shifted) <= 1e-14);
        }
}

TEST_CASE("time_integral_J: random momenta in the guard ball against the oracle")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> kk(0.1, 60.0);
    const double bound = 3.5 * std::sqrt(2.0) / 100.0;
    const DetectorConfig det = with_mass(10.0);
    for (int i = 0; i < 60; ++i) {
        const Vec3 p{bound * u(rng), bound * u(rng), bound * u(rng)};
        const PhotonCoords c{kk(rng), u(rng), 3.14159 * (1.0 + u(rng))};
        const Vec3 kv = c.vector();
        const double pk = p[0] * kv[0] + p[1] * kv[1] + p[2] * kv[2];
        const FrequencySet f = frequencies(c, det, kDrive, pk);
        const Complex oracle = time_integral_oracle(*f.omega_m, c, kDrive, {}).value;
        CHECK(rel_dev(time_integral_J(p, c, det, kDrive).value, oracle) <= 1e-8);
    }
}

TEST_CASE("taylor_coefficients: trivial cases")
{
    const DetectorConfig det = with_mass(10.0);
    const auto zero = taylor_coefficients({5.0, 0.0}, det, kDrive);
    CHECK(zero.j1 == 0.0);
    CHECK(zero.j2 == 0.0);
    for (double k : {0.2, 2.0, 20.0}) {
        const PhotonCoords c{k, 0.6};
        const auto t = taylor_coefficients(c, det, kDrive);
        const Complex j0 = time_integral_J({0.0, 0.0, 0.0}, c, det, kDrive).value;
        CHECK(t.j1 >= 0.0);
        CHECK(t.j1 == std::norm(j0));
        const double gap_shift = std::norm(time_integral_I(c, {0.2 + k * k / 20.0, Mass::infinite(), 1.0}, kDrive).value);
        CHECK(t.j1 == doctest::Approx(gap_shift).epsilon(1e-13));
        CHECK(t.j2_error <= 1e-5 * std::abs(t.j2));
    }
}

TEST_CASE("taylor_coefficients: J2 against a fourth-order stencil")
{
    const DetectorConfig det = with_mass(10.0);
    int compared = 0;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 5; ++j) {
            const double k = 0.2 + 59.8 * i / 9.0;
            const double z = -1.0 + 0.45 * j + 0.05;
            const PhotonCoords c{k, z};
            const double omega0 = *frequencies(c, det, kDrive, 0.0).omega0;
            const double h = 0.5e-3 * std::min(omega0, 1.0 / kDrive.t_accel);
            auto f = [&](double w) { return amplitude_norm2(w, c, kDrive); };
            const double second = (-f(omega0 + 2 * h) + 16 * f(omega0 + h) - 30 * f(omega0) + 16 * f(omega0 - h)
                                   - f(omega0 - 2 * h))
                                / (12 * h * h);
            const auto t = taylor_coefficients(c, det, kDrive);
            CAPTURE(k);
            CAPTURE(z);
            CHECK(std::abs(t.j2 - 0.5 * second) <= 1e-5 * std::abs(t.j2));
            ++compared;
        }
    CHECK(compared == 50);
}
