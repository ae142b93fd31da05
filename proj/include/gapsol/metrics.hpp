// gapsol: scalar observables extracted from run records — group velocity,
// pulse areas, per-layer inversion statistics, envelope shape correlation.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gapsol/envelope.hpp"
#include "gapsol/recorder.hpp"

namespace gapsol {

struct LobeVelocity {
    std::string label;  // "lobe0" = strongest
    double vg = 0.0;
    double xi1 = 0.0, xi2 = 0.0;
};

struct GroupVelocityResult {
    bool split = false;   // more than one lobe in either snapshot
    double vg = 0.0;      // strongest-lobe velocity
    std::vector<LobeVelocity> lobes; // rank-matched, strongest first
};

// vg = 2*pi*(xi2 - xi1)/(T2 - T1) from envelope-peak positions of two
// snapshots. Splitting yields per-lobe velocities matched by strength rank.
GroupVelocityResult group_velocity(const RunRecord& rec, double t1_ps, double t2_ps,
                                   std::optional<Range> xi_range = std::nullopt,
                                   double lobe_threshold = 0.1);

// Rabi-weighted time integral of the envelope, A = (Omega0/omega0) * sum(env)*dT.
// Space-axis envelopes map through xi -> 2*pi*xi / vg. Throws when the
// envelope is clipped by the window (edge above 1% of peak).
double pulse_area(const Envelope& env, double rabi0, double omega0, double vg = 1.0);

struct LayerStats {
    long layer = 0;       // index n of layer [2n*delta, 2n*delta+delta)
    double xi_begin = 0.0;
    double mean_w = 0.0;
    double max_w = 0.0;
};

struct InversionStats {
    std::vector<LayerStats> layers;          // every layer, in order
    std::vector<long> inverted_layers;       // indices with max_w > 0
    double global_max_w = -1.0;
    double mean_w_spread = 0.0;              // max - min of per-layer means
};

InversionStats inversion_stats(const RunRecord& rec, double snapshot_ps);

// Normalized cross-correlation of two space-axis envelopes after peak
// alignment, over a +-8 FWHM window around the peaks.
double shape_correlation(const RunRecord& rec, double t1_ps, double t2_ps,
                         std::optional<Range> xi_range = std::nullopt);

} // namespace gapsol
