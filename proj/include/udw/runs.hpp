#pragma once

#include "udw/config.hpp"

#include <string>

namespace udw {

enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,
    kExitConfigError = 2,
    kExitNotConverged = 3,
};

inline constexpr const char* kToolVersion = "1.0.0";

/// spectrum.csv (k, z densities), spectrum_k.csv (angle-integrated, detector
/// gap) and spectrum_k_gap_<i>.csv for each entry of grid.gaps.
int run_spectrum(const RunConfig& cfg);

/// recoil.csv over the (r, zeta) grid. Finite mass only.
int run_recoil(const RunConfig& cfg);

/// validate.json: closed form vs oracle, Taylor vs Monte Carlo, near-infinite
/// mass agreement and the velocity guard. Exit 0 iff every check passes.
int run_validate(const RunConfig& cfg);

/// limit.csv for mass = detector.mass * gamma over grid.gammas.
int run_limit(const RunConfig& cfg);

} // namespace udw
