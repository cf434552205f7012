// udwsim: spectra, recoil maps, validation and infinite-mass limit studies for
// an accelerated Unruh-DeWitt detector.
#include "udw/config.hpp"
#include "udw/errors.hpp"
#include "udw/runs.hpp"

#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct CommonOptions {
    std::string config;
    std::string out;
    unsigned workers = 0;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOptions& opts)
{
    cmd->add_option("--config", opts.config, "key = value configuration file");
    cmd->add_option("--out", opts.out, "output directory (overrides run.output)");
    cmd->add_option("--workers", opts.workers, "worker threads (overrides run.workers)")->check(CLI::Range(1u, 4096u));
    cmd->add_option("--seed", opts.seed, "Monte Carlo seed (overrides quadrature.mc_seed)");
}

udw::RunConfig resolve(const CommonOptions& opts)
{
    udw::RunConfig cfg = opts.config.empty() ? udw::RunConfig{} : udw::load_config(opts.config);
    if (!opts.out.empty())
        cfg.output_path = opts.out;
    if (opts.workers > 0)
        cfg.workers = opts.workers;
    if (opts.seed)
        cfg.quadrature.mc_seed = *opts.seed;
    cfg.validate();
    return cfg;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Unruh-DeWitt detector simulator"};
    app.set_version_flag("--version", std::string(udw::kToolVersion));
    app.require_subcommand(1);

    CommonOptions opts;
    using Runner = int (*)(const udw::RunConfig&);
    Runner runner = nullptr;
    struct Command {
        const char* name;
        const char* help;
        Runner fn;
    };
    const Command commands[] = {
        {"spectrum", "emission spectra P_U, P_M over (k, z) and per k", udw::run_spectrum},
        {"recoil", "recoil density over (r, zeta); finite mass only", udw::run_recoil},
        {"validate", "closed form vs oracle, mass limit, Taylor vs Monte Carlo", udw::run_validate},
        {"limit", "convergence of P_M to P_U as the mass grows", udw::run_limit},
    };
    for (const auto& [name, help, fn] : commands) {
        CLI::App* cmd = app.add_subcommand(name, help);
        add_common(cmd, opts);
        cmd->callback([&runner, fn = fn] { runner = fn; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : udw::kExitConfigError;
    }

    try {
        return runner(resolve(opts));
    } catch (const udw::ConfigError& e) {
        std::cerr << "udwsim: config error: " << e.what() << "\n";
        return udw::kExitConfigError;
    } catch (const udw::QuadratureNoConvergence& e) {
        std::cerr << "udwsim: " << e.what() << "\n";
        return udw::kExitNotConverged;
    } catch (const std::exception& e) {
        std::cerr << "udwsim: " << e.what() << "\n";
        return udw::kExitCheckFailed;
    }
}
