// gapsol: flat binary array format for large snapshots. 16-byte header
// (8-byte magic "GAPSOLBN", u32 version, u32 count) followed by count
// little-endian 64-bit floats.
#pragma once

#include <filesystem>
#include <vector>

namespace gapsol {

void write_bin(const std::filesystem::path& path, const std::vector<double>& values);
std::vector<double> read_bin(const std::filesystem::path& path);

} // namespace gapsol
