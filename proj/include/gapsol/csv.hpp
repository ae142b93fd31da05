// gapsol: CSV serialization. UTF-8, header row, comma separator, '.' decimal
// point, shortest round-trip decimal formatting for doubles.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gapsol/errors.hpp"

namespace gapsol {

std::string format_double(double x);
double parse_double(const std::string& s);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const;
};

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

} // namespace gapsol
