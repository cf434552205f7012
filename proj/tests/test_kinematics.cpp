#include "udw/errors.hpp"
#include "udw/kinematics.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace udw;

TEST_CASE("trajectory_z: values")
{
    const DriveConfig d{8e-3, 1.0};
    CHECK(trajectory_z(0.0, d) == 0.0);
    CHECK(trajectory_z(0.5, d) == doctest::Approx(8e-3 / 8.0).epsilon(1e-15));
    CHECK(trajectory_z(2.0, d) == doctest::Approx(1.5 * 8e-3).epsilon(1e-15));
    for (double t : {-5.0, -1.0, -1e-9})
        CHECK(trajectory_z(t, d) == 0.0);
}

TEST_CASE("trajectory_z: continuous slope at the switching times")
{
    const DriveConfig d{0.01, 2.0};
    for (double h : {1e-2, 1e-3}) {
        const double at_t = trajectory_z(2.0, d);
        const double left = (at_t - trajectory_z(2.0 - h, d)) / h;
        const double right = (trajectory_z(2.0 + h, d) - at_t) / h;
        // One-sided differences of a C^1 piecewise quadratic: errors a h / 2 and 0.
        CHECK(std::abs(right - d.final_speed()) <= 1e-12);
        CHECK(std::abs(left - d.final_speed()) <= 0.5 * d.accel * h * (1 + 1e-9));
        const double at_zero_right = trajectory_z(h, d) / h;
        CHECK(std::abs(at_zero_right) <= 0.5 * d.accel * h * (1 + 1e-9));
    }
}

TEST_CASE("frequencies: definitions")
{
    const DetectorConfig det{0.2, Mass::infinite(), 1.0};
    const DriveConfig d{8e-3, 1.0};
    auto f = frequencies({1e-12, 0.3}, det, d);
    CHECK(f.omega == doctest::Approx(0.2).epsilon(1e-10));
    f = frequencies({5.0, 0.0}, det, d);
    CHECK(f.omega_prime == f.omega);
    CHECK_FALSE(f.omega0.has_value());

    DetectorConfig heavy = det;
    heavy.mass = Mass::finite(10.0);
    f = frequencies({5.0, 0.4}, heavy, d, 0.0);
    CHECK(*f.omega0 == doctest::Approx(5.2 + 25.0 / 20.0));
    CHECK(*f.omega_m == *f.omega0);
    CHECK(*f.omega_m_prime == doctest::Approx(*f.omega_m - 8e-3 * 2.0));

    f = frequencies({5.0, 0.4}, heavy, d, 1.0);
    CHECK(*f.omega_m == doctest::Approx(*f.omega0 - 0.1));
    CHECK_THROWS_AS(frequencies({5.0, 0.4}, heavy, d, 100.0), NonPositiveFrequency);
}

TEST_CASE("frequencies: Doppler ordering and positivity on a random grid")
{
    const DetectorConfig det{0.2, Mass::infinite(), 1.0};
    const DriveConfig d{kVelocityBound, 1.0};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> k(1e-6, 1e4);
    std::uniform_real_distribution<double> z(-1.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const PhotonCoords c{k(rng), z(rng)};
        const FrequencySet f = frequencies(c, det, d);
        CHECK(f.omega_prime > 0.0);
        if (c.z > 0.0)
            CHECK(f.omega_prime < f.omega);
        if (c.z < 0.0)
            CHECK(f.omega_prime > f.omega);
    }
}

TEST_CASE("validate_nonrelativistic")
{
    DetectorConfig det{0.2, Mass::finite(10.0), 1.0};
    const DriveConfig reference{8e-3, 1.0};
    auto r = validate_nonrelativistic(det, reference, 100.0, 3.5);
    CHECK(r.initial_speed == doctest::Approx(2.0 * 3.5 * std::sqrt(2.0) / 1000.0));
    CHECK(r.drive_speed == doctest::Approx(8e-3));
    CHECK(r.total_speed == doctest::Approx(r.initial_speed + r.drive_speed));
    // 0.0099 + 0.008 exceeds the bound: the guard fails at the reference parameters.
    CHECK_FALSE(r.pass);

    r = validate_nonrelativistic(det, {0.02, 1.0}, 1e6, 3.5);
    CHECK_FALSE(r.pass);
    r = validate_nonrelativistic(det, reference, 100.0, 0.0);
    CHECK(r.initial_speed == 0.0);
    CHECK(r.pass);
    r = validate_nonrelativistic(det, {0.011, 1.0}, 100.0, 0.0);
    CHECK_FALSE(r.pass);
}

TEST_CASE("config validation")
{
    CHECK_THROWS_AS(Mass::finite(0.0), ConfigError);
    CHECK_THROWS_AS(Mass::finite(-1.0), ConfigError);
    CHECK_THROWS_AS((DriveConfig{-1e-3, 1.0}.validate()), ConfigError);
    CHECK_THROWS_AS((DriveConfig{1e-3, 0.0}.validate()), ConfigError);
    CHECK_NOTHROW((DriveConfig{0.0, 1.0}.validate()));
    CHECK_THROWS_AS((DetectorConfig{0.0, Mass::infinite(), 1.0}.validate()), ConfigError);
    CHECK_THROWS_AS((DetectorConfig{0.2, Mass::infinite(), 0.0}.validate()), ConfigError);
    CHECK_THROWS((PhotonCoords{0.0, 0.5}.validate()));
    CHECK_THROWS((PhotonCoords{1.0, 1.5}.validate()));
    CHECK(DriveConfig{8e-3, 1.0}.within_velocity_bound());
    CHECK_FALSE(DriveConfig{0.02, 1.0}.within_velocity_bound());
}
