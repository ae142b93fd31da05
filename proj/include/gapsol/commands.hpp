// gapsol: CLI entry points shared by the binary and the test suite.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace gapsol {

struct SweepAxis {
    std::string field_path; // dotted JSON path, e.g. medium.d
    std::vector<double> values;
};

// "medium.d=0.1,0.2,0.4" -> axis
SweepAxis parse_axis_spec(const std::string& spec);

int cmd_run(const std::filesystem::path& config_path,
            const std::optional<std::string>& out_dir, bool quiet);

int cmd_analyze(const std::filesystem::path& run_dir,
                const std::filesystem::path& spec_path, bool quiet);

int cmd_sweep(const std::filesystem::path& config_path, const SweepAxis& axis,
              const std::optional<SweepAxis>& axis2,
              const std::optional<std::string>& out_dir, bool quiet, int threads = 1);

} // namespace gapsol
