#include "gapsol/binfile.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "gapsol/errors.hpp"

namespace gapsol {

namespace {
constexpr char kMagic[8] = {'G', 'A', 'P', 'S', 'O', 'L', 'B', 'N'};
constexpr std::uint32_t kVersion = 1;
} // namespace

void write_bin(const std::filesystem::path& path, const std::vector<double>& values) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IntegrityError("binfile: cannot open " + path.string() + " for writing");
    out.write(kMagic, 8);
    const std::uint32_t version = kVersion;
    const std::uint32_t count = std::uint32_t(values.size());
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&count), 4);
    out.write(reinterpret_cast<const char*>(values.data()),
              std::streamsize(values.size() * sizeof(double)));
    if (!out)
        throw IntegrityError("binfile: write failed for " + path.string());
}

std::vector<double> read_bin(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IntegrityError("binfile: cannot open " + path.string());
    char magic[8];
    std::uint32_t version = 0, count = 0;
    in.read(magic, 8);
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&count), 4);
    if (!in || std::memcmp(magic, kMagic, 8) != 0)
        throw IntegrityError("binfile: bad magic in " + path.string());
    if (version != kVersion)
        throw IntegrityError("binfile: unsupported version in " + path.string());
    std::vector<double> values(count);
    in.read(reinterpret_cast<char*>(values.data()), std::streamsize(count * sizeof(double)));
    if (!in)
        throw IntegrityError("binfile: truncated data in " + path.string());
    return values;
}

} // namespace gapsol
