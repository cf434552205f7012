#include "udw/runs.hpp"

#include "udw/amplitude.hpp"
#include "udw/errors.hpp"
#include "udw/output.hpp"
#include "udw/probability.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>

namespace udw {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

// Shared bookkeeping for one run: timing, convergence flags, clamping counts
// and the manifest.
class RunReport {
public:
    RunReport(std::string command, const RunConfig& cfg) : command_(std::move(command)), cfg_(cfg) {}

    void add_integral(std::string quantity, std::vector<double> at, const IntegralEstimate& e)
    {
        all_converged_ = all_converged_ && e.converged;
        integrals_.push_back({std::move(quantity), std::move(at), e});
    }

    // Values in (-abs_tol, 0) are numerical noise around a true zero.
    double clamp_density(double v)
    {
        if (v < 0.0 && v > -cfg_.quadrature.abs_tol) {
            ++clamped_;
            return 0.0;
        }
        if (v < 0.0)
            ++negative_;
        return v;
    }

    void add_output(const std::string& name) { outputs_.push_back(name); }
    json& extra() { return extra_; }
    [[nodiscard]] bool all_converged() const { return all_converged_; }

    void finish(int exit_code) const
    {
        json m;
        m["tool"] = "udwsim";
        m["version"] = kToolVersion;
        m["command"] = command_;
        m["config"] = config_to_json(cfg_);
        m["wall_time_s"] = std::chrono::duration<double>(Clock::now() - start_).count();
        m["outputs"] = outputs_;
        m["all_converged"] = all_converged_;
        m["clamped_negative"] = clamped_;
        m["negative_below_floor"] = negative_;
        m["integrals"] = integrals_to_json(integrals_);
        m["exit_code"] = exit_code;
        if (!extra_.is_null())
            m["results"] = extra_;
        write_text(cfg_.output_path / "manifest.json", m.dump(2) + "\n");
    }

private:
    std::string command_;
    const RunConfig& cfg_;
    Clock::time_point start_ = Clock::now();
    std::vector<IntegralRecord> integrals_;
    std::vector<std::string> outputs_;
    json extra_;
    std::size_t clamped_ = 0;
    std::size_t negative_ = 0;
    bool all_converged_ = true;
};

void prepare_output(const RunConfig& cfg)
{
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_path, ec);
    if (ec || !std::filesystem::is_directory(cfg.output_path))
        throw ConfigError("cannot create output directory " + cfg.output_path.string());
}

void require_velocity_bound(const DriveConfig& drive)
{
    if (!drive.within_velocity_bound())
        throw ConfigError("drive: accel * t_accel exceeds the velocity bound " + format_double(kVelocityBound));
}

void require_finite_mass(const DetectorConfig& det, const char* what)
{
    if (det.mass.is_infinite())
        throw ConfigError(std::string(what) + " requires a finite detector.mass");
}

int finish(RunReport& report, int exit_code)
{
    // A non-converged integral makes every downstream check unreliable.
    if (!report.all_converged())
        exit_code = kExitNotConverged;
    report.finish(exit_code);
    return exit_code;
}

struct KSeries {
    std::vector<IntegralEstimate> p_u;
    std::vector<IntegralEstimate> p_m;
};

KSeries angle_integrated(const std::vector<double>& ks, const DetectorConfig& det, const RunConfig& cfg)
{
    KSeries s;
    s.p_u.resize(ks.size());
    s.p_m.resize(ks.size());
    std::vector<double> ignored;
    // Results are written by index; the returned doubles are unused.
    evaluate_indexed(ks.size(), cfg.workers,
                     [&](std::size_t i) {
                         s.p_u[i] = p_u_k(ks[i], det, cfg.drive, cfg.quadrature);
                         s.p_m[i] = det.mass.is_infinite() ? s.p_u[i]
                                                           : p_m_k(ks[i], det, cfg.drive, cfg.wavepacket, cfg.quadrature);
                         return 0.0;
                     },
                     ignored);
    return s;
}

} // namespace

int run_spectrum(const RunConfig& cfg)
{
    require_velocity_bound(cfg.drive);
    prepare_output(cfg);
    RunReport report("spectrum", cfg);

    const auto ks = linspace(cfg.grids.k_min, cfg.grids.k_max, cfg.grids.k_count);
    const auto zs = linspace(-1.0, 1.0, cfg.grids.z_count);
    const std::size_t nz = zs.size();

    std::vector<double> pu(ks.size() * nz);
    std::vector<double> pm(ks.size() * nz);
    std::vector<double> ignored;
    evaluate_indexed(pu.size(), cfg.workers,
                     [&](std::size_t i) {
                         const double k = ks[i / nz];
                         const double z = zs[i % nz];
                         pu[i] = p_u_density(k, z, cfg.detector, cfg.drive);
                         pm[i] = p_m_density_kz(k, z, cfg.detector, cfg.drive, cfg.wavepacket);
                         return 0.0;
                     },
                     ignored);

    CsvTable spectrum({"k", "z", "P_U", "P_M", "P_U_minus_P_M"});
    for (std::size_t i = 0; i < pu.size(); ++i) {
        const double u = report.clamp_density(pu[i]);
        const double m = report.clamp_density(pm[i]);
        spectrum.add_row({ks[i / nz], zs[i % nz], u, m, u - m});
    }
    spectrum.write(cfg.output_path / "spectrum.csv");
    report.add_output("spectrum.csv");

    auto write_k = [&](const DetectorConfig& det, const std::string& name) {
        const KSeries s = angle_integrated(ks, det, cfg);
        CsvTable table({"k", "P_U_k", "P_M_k"});
        std::size_t peak = 0;
        for (std::size_t i = 0; i < ks.size(); ++i) {
            report.add_integral("P_U_k", {det.gap, ks[i]}, s.p_u[i]);
            report.add_integral("P_M_k", {det.gap, ks[i]}, s.p_m[i]);
            table.add_row({ks[i], report.clamp_density(s.p_u[i].value), report.clamp_density(s.p_m[i].value)});
            if (s.p_u[i].value > s.p_u[peak].value)
                peak = i;
        }
        table.write(cfg.output_path / name);
        report.add_output(name);
        report.extra()["peaks"].push_back({{"file", name}, {"gap", det.gap}, {"k_peak", ks[peak]}});
    };

    write_k(cfg.detector, "spectrum_k.csv");
    for (std::size_t g = 0; g < cfg.grids.gaps.size(); ++g) {
        DetectorConfig det = cfg.detector;
        det.gap = cfg.grids.gaps[g];
        write_k(det, "spectrum_k_gap_" + std::to_string(g) + ".csv");
    }
    return finish(report, kExitOk);
}

int run_recoil(const RunConfig& cfg)
{
    require_finite_mass(cfg.detector, "recoil");
    require_velocity_bound(cfg.drive);
    prepare_output(cfg);
    RunReport report("recoil", cfg);

    const auto rs = linspace(cfg.grids.r_min, cfg.grids.r_max, cfg.grids.r_count);
    const auto zetas = linspace(-1.0, 1.0, cfg.grids.zeta_count);
    const std::size_t nzeta = zetas.size();
    std::vector<IntegralEstimate> values(rs.size() * nzeta);
    std::vector<double> ignored;
    evaluate_indexed(values.size(), cfg.workers,
                     [&](std::size_t i) {
                         values[i] = p_m_recoil_density(rs[i / nzeta], zetas[i % nzeta], cfg.detector, cfg.drive,
                                                        cfg.wavepacket, cfg.quadrature);
                         return 0.0;
                     },
                     ignored);

    CsvTable table({"r", "zeta", "density", "est_error"});
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double r = rs[i / nzeta];
        const double zeta = zetas[i % nzeta];
        report.add_integral("P_M_recoil", {r, zeta}, values[i]);
        table.add_row({r, zeta, report.clamp_density(values[i].value), values[i].est_error});
    }
    table.write(cfg.output_path / "recoil.csv");
    report.add_output("recoil.csv");
    return finish(report, kExitOk);
}

int run_validate(const RunConfig& cfg)
{
    prepare_output(cfg);
    RunReport report("validate", cfg);
    json checks;
    bool all_pass = true;

    {
        // Closed form vs the quadrature oracle on a 200 x 41 grid.
        const auto ks = linspace(cfg.grids.k_min, cfg.grids.k_max, 200);
        const auto zs = linspace(-1.0, 1.0, 41);
        std::vector<double> dev(ks.size() * zs.size());
        evaluate_indexed(dev.size(), cfg.workers,
                         [&](std::size_t i) {
                             const PhotonCoords c{ks[i / zs.size()], zs[i % zs.size()]};
                             const Complex closed = time_integral_I(c, cfg.detector, cfg.drive).value;
                             const FrequencySet f = frequencies(c, cfg.detector, cfg.drive);
                             const Complex oracle = time_integral_oracle(f.omega, c, cfg.drive, cfg.quadrature).value;
                             const double diff = std::abs(closed - oracle);
                             if (std::abs(c.kz()) * cfg.drive.accel * cfg.drive.t_accel * cfg.drive.t_accel < 1e-8)
                                 return diff <= 1e-12 && std::abs(oracle) <= 1e-12 ? 0.0 : 1.0;
                             return diff / std::abs(oracle);
                         },
                         dev);
        const double worst = *std::max_element(dev.begin(), dev.end());
        const bool pass = worst <= 1e-8;
        checks["closed_form_vs_oracle"] = {{"pass", pass}, {"max_rel_dev", worst}, {"tolerance", 1e-8},
                                           {"points", dev.size()}};
        all_pass = all_pass && pass;
    }

    {
        // Mass 1e9 against the infinite-mass densities.
        DetectorConfig heavy = cfg.detector;
        heavy.mass = Mass::finite(1e9);
        const auto ks = linspace(cfg.grids.k_min, cfg.grids.k_max, 40);
        const auto zs = linspace(-1.0, 1.0, 9);
        double worst = 0.0;
        double worst_abs = 0.0;
        double peak = 0.0;
        for (double k : ks)
            for (double z : zs) {
                const double u = p_u_density(k, z, cfg.detector, cfg.drive);
                const double m = p_m_density_kz(k, z, heavy, cfg.drive, cfg.wavepacket);
                peak = std::max(peak, u);
                worst_abs = std::max(worst_abs, std::abs(m - u));
                if (u > 0.0)
                    worst = std::max(worst, std::abs(m - u) / u);
                else if (m != 0.0)
                    worst = std::max(worst, 1.0);
            }
        const bool pass = worst <= 1e-6;
        checks["infinite_mass_pointwise"] = {{"pass", pass},
                                             {"max_rel_dev", worst},
                                             {"max_dev_over_peak", peak > 0.0 ? worst_abs / peak : 0.0},
                                             {"tolerance", 1e-6}};
        all_pass = all_pass && pass;
    }

    if (cfg.detector.mass.is_infinite()) {
        checks["taylor_vs_monte_carlo"] = {{"pass", true}, {"skipped", "infinite mass"}};
        checks["velocity_guard"] = {{"pass", cfg.drive.within_velocity_bound()},
                                    {"drive_speed", cfg.drive.final_speed()},
                                    {"bound", kVelocityBound}};
        all_pass = all_pass && cfg.drive.within_velocity_bound();
    } else {
        const auto ks = linspace(std::max(cfg.grids.k_min, 0.5), cfg.grids.k_max, 20);
        const auto zs = linspace(-1.0, 1.0, 9);
        double worst_sigma = 0.0;
        std::size_t rejected = 0;
        std::size_t failures = 0;
        for (double k : ks)
            for (double z : zs) {
                const double taylor = p_m_density_kz(k, z, cfg.detector, cfg.drive, cfg.wavepacket);
                const MonteCarloEstimate mc = p_m_density_kz_exact(k, z, cfg.detector, cfg.drive, cfg.wavepacket,
                                                                   cfg.quadrature, cfg.workers);
                rejected += mc.rejected;
                const double diff = std::abs(taylor - mc.mean);
                if (diff > 3.0 * mc.std_error)
                    ++failures;
                if (mc.std_error > 0.0)
                    worst_sigma = std::max(worst_sigma, diff / mc.std_error);
            }
        const bool pass = failures == 0 && rejected == 0;
        checks["taylor_vs_monte_carlo"] = {{"pass", pass},           {"max_deviation_in_stderr", worst_sigma},
                                           {"points_outside", failures}, {"rejected_samples", rejected},
                                           {"mc_samples", cfg.quadrature.mc_samples}};
        all_pass = all_pass && pass;

        const ValidationReport guard = validate_nonrelativistic(cfg.detector, cfg.drive, cfg.wavepacket.width_L,
                                                                cfg.wavepacket.sigma_guard);
        checks["velocity_guard"] = {{"pass", guard.pass},
                                    {"initial_speed", guard.initial_speed},
                                    {"drive_speed", guard.drive_speed},
                                    {"total_speed", guard.total_speed},
                                    {"bound", guard.bound}};
        all_pass = all_pass && guard.pass;
    }

    const json out = {{"all_pass", all_pass}, {"checks", checks}};
    write_text(cfg.output_path / "validate.json", out.dump(2) + "\n");
    report.add_output("validate.json");
    report.extra() = out;
    return finish(report, all_pass ? kExitOk : kExitCheckFailed);
}

int run_limit(const RunConfig& cfg)
{
    require_finite_mass(cfg.detector, "limit");
    require_velocity_bound(cfg.drive);
    prepare_output(cfg);
    RunReport report("limit", cfg);

    const auto ks = linspace(cfg.grids.k_min, cfg.grids.k_max, cfg.grids.k_count);
    const ConvergenceReport study =
        infinite_mass_limit_study(cfg.grids.gammas, cfg.detector.mass.value(), cfg.detector, cfg.drive,
                                  cfg.wavepacket, ks, cfg.quadrature, cfg.workers);
    CsvTable table({"gamma", "max_abs_dev", "rel_dev_at_peak"});
    for (const auto& row : study.rows)
        table.add_row({row.gamma, row.max_abs_dev, row.rel_dev_at_peak});
    table.write(cfg.output_path / "limit.csv");
    report.add_output("limit.csv");
    report.add_integral("limit_study", {}, IntegralEstimate{0.0, 0.0, 0, study.converged});
    report.extra() = {{"strictly_decreasing", study.strictly_decreasing},
                      {"peak_k", study.peak_k},
                      {"peak_P_U_k", study.peak_p_u}};
    return finish(report, study.strictly_decreasing ? kExitOk : kExitCheckFailed);
}

} // namespace udw
