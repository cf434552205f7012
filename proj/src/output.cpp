#include "udw/output.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <stdexcept>

namespace udw {

std::string format_double(double v)
{
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc())
        throw std::runtime_error("format_double: conversion failed");
    return {buf.data(), ptr};
}

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size())
{
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i)
            text_ += ',';
        text_ += header[i];
    }
    text_ += '\n';
}

void CsvTable::add_row(const std::vector<double>& values)
{
    if (values.size() != columns_)
        throw std::invalid_argument("CsvTable: row width does not match the header");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            text_ += ',';
        text_ += format_double(values[i]);
    }
    text_ += '\n';
    ++rows_;
}

std::string CsvTable::str() const
{
    return text_;
}

void CsvTable::write(const std::filesystem::path& path) const
{
    write_text(path, text_);
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out)
        throw std::runtime_error("write failed for " + path.string());
}

nlohmann::json config_to_json(const RunConfig& cfg)
{
    using nlohmann::json;
    json mass = cfg.detector.mass.is_infinite() ? json("inf") : json(cfg.detector.mass.value());
    return {
        {"detector", {{"gap", cfg.detector.gap}, {"mass", mass}, {"coupling", cfg.detector.coupling}}},
        {"drive", {{"accel", cfg.drive.accel}, {"t_accel", cfg.drive.t_accel}}},
        {"wavepacket", {{"width", cfg.wavepacket.width_L}, {"sigma_guard", cfg.wavepacket.sigma_guard}}},
        {"quadrature",
         {{"rel_tol", cfg.quadrature.rel_tol},
          {"abs_tol", cfg.quadrature.abs_tol},
          {"max_subdiv", cfg.quadrature.max_subdiv},
          {"panels_per_period", cfg.quadrature.panels_per_period},
          {"k_cutoff_rel", cfg.quadrature.k_cutoff_rel},
          {"mc_samples", cfg.quadrature.mc_samples},
          {"mc_seed", cfg.quadrature.mc_seed},
          {"mc_sigma_trunc", cfg.quadrature.mc_sigma_trunc}}},
        {"grid",
         {{"k_min", cfg.grids.k_min},
          {"k_max", cfg.grids.k_max},
          {"k_count", cfg.grids.k_count},
          {"z_count", cfg.grids.z_count},
          {"r_min", cfg.grids.r_min},
          {"r_max", cfg.grids.r_max},
          {"r_count", cfg.grids.r_count},
          {"zeta_count", cfg.grids.zeta_count},
          {"gaps", cfg.grids.gaps},
          {"accels", cfg.grids.accels},
          {"gammas", cfg.grids.gammas}}},
        {"run", {{"output", cfg.output_path.string()}, {"workers", cfg.workers}}},
    };
}

nlohmann::json integrals_to_json(const std::vector<IntegralRecord>& records)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : records) {
        out.push_back({{"quantity", r.quantity},
                       {"at", r.at},
                       {"value", r.estimate.value},
                       {"est_error", r.estimate.est_error},
                       {"evaluations", r.estimate.evaluations},
                       {"converged", r.estimate.converged}});
    }
    return out;
}

} // namespace udw
