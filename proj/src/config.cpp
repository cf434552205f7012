#include "udw/config.hpp"

#include "udw/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <set>

namespace udw {
namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text)
{
    double v = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        throw ConfigError(key + ": expected a number, got '" + text + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text)
{
    std::uint64_t v = 0;
    int base = 10;
    std::string digits = text;
    if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X')) {
        base = 16;
        digits = digits.substr(2);
    }
    const char* end = digits.data() + digits.size();
    auto [ptr, ec] = std::from_chars(digits.data(), end, v, base);
    if (ec != std::errc() || ptr != end || digits.empty())
        throw ConfigError(key + ": expected a non-negative integer, got '" + text + "'");
    return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text)
{
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string item = trim(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        out.push_back(parse_double(key, item));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return out;
}

void require_count(const char* name, std::size_t n)
{
    if (n < 2)
        throw ConfigError(std::string("grid.") + name + " must be >= 2");
}

} // namespace

std::vector<double> linspace(double lo, double hi, std::size_t count)
{
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    for (std::size_t i = 0; i < count; ++i)
        out[i] = i + 1 == count ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    return out;
}

void GridSpec::validate() const
{
    require_count("k_count", k_count);
    require_count("z_count", z_count);
    require_count("r_count", r_count);
    require_count("zeta_count", zeta_count);
    if (!(k_min > 0.0 && k_max > k_min))
        throw ConfigError("grid: requires 0 < k_min < k_max");
    if (!(r_min >= 0.0 && r_max > r_min))
        throw ConfigError("grid: requires 0 <= r_min < r_max");
    for (double g : gaps)
        if (!(g > 0.0))
            throw ConfigError("grid.gaps: entries must be > 0");
    for (double a : accels)
        if (!(a >= 0.0))
            throw ConfigError("grid.accels: entries must be >= 0");
    if (gammas.empty())
        throw ConfigError("grid.gammas: needs at least one entry");
    for (double g : gammas)
        if (!(g > 0.0))
            throw ConfigError("grid.gammas: entries must be > 0");
}

void RunConfig::validate() const
{
    detector.validate();
    drive.validate();
    wavepacket.validate();
    quadrature.validate();
    grids.validate();
    if (workers < 1)
        throw ConfigError("run.workers must be >= 1");
}

RunConfig parse_config(std::istream& in)
{
    RunConfig cfg;
    using Setter = std::function<void(const std::string&, const std::string&)>;
    auto real = [](double& target) -> Setter {
        return [&target](const std::string& k, const std::string& v) { target = parse_double(k, v); };
    };
    auto count = [](std::size_t& target) -> Setter {
        return [&target](const std::string& k, const std::string& v) { target = parse_u64(k, v); };
    };
    auto list = [](std::vector<double>& target) -> Setter {
        return [&target](const std::string& k, const std::string& v) { target = parse_list(k, v); };
    };

    const std::map<std::string, Setter> setters{
        {"detector.gap", real(cfg.detector.gap)},
        {"detector.mass",
         [&](const std::string& k, const std::string& v) {
             cfg.detector.mass = (v == "inf" || v == "Infinite") ? Mass::infinite() : Mass::finite(parse_double(k, v));
         }},
        {"detector.coupling", real(cfg.detector.coupling)},
        {"drive.accel", real(cfg.drive.accel)},
        {"drive.t_accel", real(cfg.drive.t_accel)},
        {"wavepacket.width", real(cfg.wavepacket.width_L)},
        {"wavepacket.sigma_guard", real(cfg.wavepacket.sigma_guard)},
        {"quadrature.rel_tol", real(cfg.quadrature.rel_tol)},
        {"quadrature.abs_tol", real(cfg.quadrature.abs_tol)},
        {"quadrature.max_subdiv", count(cfg.quadrature.max_subdiv)},
        {"quadrature.panels_per_period", count(cfg.quadrature.panels_per_period)},
        {"quadrature.k_cutoff_rel", real(cfg.quadrature.k_cutoff_rel)},
        {"quadrature.mc_samples", count(cfg.quadrature.mc_samples)},
        {"quadrature.mc_seed",
         [&](const std::string& k, const std::string& v) { cfg.quadrature.mc_seed = parse_u64(k, v); }},
        {"quadrature.mc_sigma_trunc", real(cfg.quadrature.mc_sigma_trunc)},
        {"grid.k_min", real(cfg.grids.k_min)},
        {"grid.k_max", real(cfg.grids.k_max)},
        {"grid.k_count", count(cfg.grids.k_count)},
        {"grid.z_count", count(cfg.grids.z_count)},
        {"grid.r_min", real(cfg.grids.r_min)},
        {"grid.r_max", real(cfg.grids.r_max)},
        {"grid.r_count", count(cfg.grids.r_count)},
        {"grid.zeta_count", count(cfg.grids.zeta_count)},
        {"grid.gaps", list(cfg.grids.gaps)},
        {"grid.accels", list(cfg.grids.accels)},
        {"grid.gammas", list(cfg.grids.gammas)},
        {"run.output", [&](const std::string&, const std::string& v) { cfg.output_path = v; }},
        {"run.workers",
         [&](const std::string& k, const std::string& v) {
             const auto n = parse_u64(k, v);
             if (n < 1 || n > 4096)
                 throw ConfigError(k + ": must be in [1, 4096]");
             cfg.workers = static_cast<unsigned>(n);
         }},
    };

    std::set<std::string> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end())
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        if (!seen.insert(key).second)
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        if (value.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty value for '" + key + "'");
        it->second(key, value);
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    return parse_config(in);
}

} // namespace udw
