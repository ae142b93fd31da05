// gapsol: FNV-1a 64-bit checksums for emitted-file integrity.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace gapsol {

std::uint64_t fnv1a64(const void* data, std::size_t size);
std::string checksum_file(const std::filesystem::path& path); // "fnv1a64:<hex>"

} // namespace gapsol
