#pragma once

#include "udw/config.hpp"
#include "udw/quadrature.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace udw {

/// Shortest decimal string that reads back to exactly `v` ("C" locale).
std::string format_double(double v);

/// Comma-separated table with `\n` line endings, built in memory.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(const std::vector<double>& values);
    [[nodiscard]] std::string str() const;
    void write(const std::filesystem::path& path) const;
    [[nodiscard]] std::size_t rows() const { return rows_; }

private:
    std::size_t columns_;
    std::size_t rows_ = 0;
    std::string text_;
};

struct IntegralRecord {
    std::string quantity;
    std::vector<double> at;  // grid coordinates of the integral
    IntegralEstimate estimate;
};

nlohmann::json config_to_json(const RunConfig& cfg);
nlohmann::json integrals_to_json(const std::vector<IntegralRecord>& records);

void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace udw
