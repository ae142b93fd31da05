// gapsol: damped least-squares fit of the analytic forward-wave soliton to
// numerical field data, plus the small Levenberg-Marquardt core it rides on.
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gapsol/recorder.hpp"
#include "gapsol/soliton.hpp"

namespace gapsol {

struct SolitonFit {
    double vg = 0.0;
    double tau = 0.0;
    double center = 0.0;         // xi_m or T_m
    double phi = 0.0;            // phase in [0, 2*pi)
    double amplitude_scale = 1.0;
    double rms_residual = 0.0;   // over center +- 4*tau (time) / mapped width (space)
    EnvelopeAxis axis = EnvelopeAxis::SpaceAtFixedT;
    bool converged = true;
    int iterations = 0;
};

// Fit failure carrying the best parameters reached before giving up.
struct FitError : std::runtime_error {
    FitError(const std::string& msg, SolitonFit best_so_far)
        : std::runtime_error(msg), best(best_so_far) {}
    SolitonFit best;
};

// Levenberg-Marquardt with central-difference Jacobian and per-parameter box
// clamping. Returns the converged parameters; `ok` reports convergence.
struct LmOptions {
    int max_iterations = 200;
    double ftol = 1e-14;     // relative cost improvement
    double xtol = 1e-13;     // relative step size
    std::vector<double> lower, upper; // optional boxes, empty = unbounded
    std::vector<bool> frozen;         // optional per-parameter freeze
};
struct LmResult {
    std::vector<double> params;
    double cost = 0.0; // sum of squared residuals
    int iterations = 0;
    bool ok = false;
};
using ResidualFn = std::function<void(const std::vector<double>&, std::vector<double>&)>;
LmResult lm_fit(const ResidualFn& residuals, std::size_t n_residuals,
                std::vector<double> initial, const LmOptions& opts = {});

struct FitRequest {
    EnvelopeAxis axis = EnvelopeAxis::SpaceAtFixedT;
    double snapshot_ps = 0.0;           // space axis source
    double probe_xi = 0.0;              // time axis source
    std::optional<Range> search_range;  // coordinate range to look for the pulse
    std::optional<double> vg_seed;      // e.g. from group_velocity
};

SolitonFit fit_soliton(const RunRecord& rec, const FitRequest& req);

// Core fit on raw samples (exposed for round-trip property tests).
SolitonFit fit_soliton_series(const std::vector<double>& coords,
                              const std::vector<double>& field, EnvelopeAxis axis,
                              double omega0, double rabi0,
                              std::optional<double> vg_seed = std::nullopt);

} // namespace gapsol
