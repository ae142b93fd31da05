// gapsol: run-directory serialization — snapshot/probe/analysis CSVs, results
// JSON, checksum manifest — and lossless reload for re-analysis.
#pragma once

#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include "gapsol/config.hpp"
#include "gapsol/csv.hpp"
#include "gapsol/recorder.hpp"

namespace gapsol {

inline constexpr const char* kCodeVersion = "0.1.0";

// Executes the requested analyses against a record. Scalar results land in
// the returned JSON (keyed by request name); tabular outputs are appended to
// extra_csvs as (filename, table).
nlohmann::json execute_analyses(const RunRecord& rec,
                                const std::vector<AnalysisRequest>& requests,
                                std::vector<std::pair<std::string, CsvTable>>& extra_csvs);

struct RunOutputs {
    std::filesystem::path dir;
    std::vector<std::string> files;
    nlohmann::json results;
};

RunOutputs write_run_outputs(const RunRecord& rec, const ExperimentConfig& cfg,
                             const std::filesystem::path& dir, double wall_clock_s);

// Rebuilds a RunRecord from a run directory, verifying manifest checksums.
// Probe sample times are reconstructed from stride * dT, so reloaded series
// are bit-identical to the originals.
RunRecord load_run_record(const std::filesystem::path& dir);

// True when the directory holds a manifest whose checksums all verify.
bool run_dir_valid(const std::filesystem::path& dir);

} // namespace gapsol
