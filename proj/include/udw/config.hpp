#pragma once

#include "udw/kinematics.hpp"
#include "udw/probability.hpp"
#include "udw/quadrature.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace udw {

struct GridSpec {
    double k_min = 0.05;
    double k_max = 60.0;
    std::size_t k_count = 480;
    std::size_t z_count = 81;
    double r_min = 0.002;
    double r_max = 0.06;
    std::size_t r_count = 60;
    std::size_t zeta_count = 37;
    std::vector<double> gaps{0.1, 0.2, 0.4};
    std::vector<double> accels{1e-3, 2e-3, 4e-3, 8e-3};
    std::vector<double> gammas{1.0, 2.0, 4.0, 8.0, 16.0};

    void validate() const;
};

/// Everything a run needs. Defaults are the reference parameters:
/// gap 0.2, mass 10, a = 8e-3, T = 1, L = 100.
struct RunConfig {
    DetectorConfig detector{0.2, Mass::finite(10.0), 1.0};
    DriveConfig drive{8e-3, 1.0};
    WavepacketConfig wavepacket{};
    QuadratureConfig quadrature{};
    GridSpec grids{};
    std::filesystem::path output_path = "out";
    unsigned workers = 1;

    void validate() const;
};

/// Parses `key = value` lines. Blank lines and `#` comments are ignored.
/// Unknown keys, duplicate keys and malformed values throw ConfigError.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

/// Inclusive linear grid of `count` points.
std::vector<double> linspace(double lo, double hi, std::size_t count);

} // namespace udw
