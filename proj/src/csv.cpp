#include "gapsol/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gapsol {

std::string format_double(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc{})
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

double parse_double(const std::string& s) {
    double value = 0.0;
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw IntegrityError("csv: malformed number '" + s + "'");
    return value;
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw IntegrityError("csv: missing column '" + name + "'");
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IntegrityError("csv: cannot open " + path.string() + " for writing");
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out << ',';
        out << table.header[i];
    }
    out << '\n';
    std::string line;
    for (const auto& row : table.rows) {
        line.clear();
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) line += ',';
            line += format_double(row[i]);
        }
        line += '\n';
        out << line;
    }
    if (!out)
        throw IntegrityError("csv: write failed for " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IntegrityError("csv: cannot open " + path.string());
    CsvTable table;
    std::string line;
    if (!std::getline(in, line))
        throw IntegrityError("csv: empty file " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) table.header.push_back(cell);

    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        row.reserve(table.header.size());
        std::size_t pos = 0;
        while (pos <= line.size()) {
            const std::size_t comma = line.find(',', pos);
            const std::size_t end = comma == std::string::npos ? line.size() : comma;
            row.push_back(parse_double(line.substr(pos, end - pos)));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (row.size() != table.header.size())
            throw IntegrityError("csv: ragged row in " + path.string());
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace gapsol
