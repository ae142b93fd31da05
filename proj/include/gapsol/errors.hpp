// gapsol: shared error types.
#pragma once

#include <stdexcept>
#include <string>

namespace gapsol {

// Invalid or mutually inconsistent user-supplied parameters.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite field values detected during a run.
struct DivergedError : std::runtime_error {
    DivergedError(const std::string& msg, long step)
        : std::runtime_error(msg), step_index(step) {}
    long step_index;
};

// Analysis preconditions not met: missing data, clipped windows, ambiguity.
struct AnalysisError : std::runtime_error {
    explicit AnalysisError(const std::string& msg) : std::runtime_error(msg) {}
};

// Stored-record integrity violation (checksum mismatch, missing file).
struct IntegrityError : std::runtime_error {
    explicit IntegrityError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace gapsol
