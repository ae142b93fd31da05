// gapsol: amplitude envelopes via the analytic signal, and the measurements
// built on them (intensity FWHM, cycle number, lobe detection).
#pragma once

#include <optional>
#include <vector>

#include "gapsol/errors.hpp"
#include "gapsol/recorder.hpp"

namespace gapsol {

enum class EnvelopeAxis { SpaceAtFixedT, TimeAtFixedXi };

struct Envelope {
    EnvelopeAxis axis = EnvelopeAxis::SpaceAtFixedT;
    std::vector<double> coordinates; // xi (space) or T (time), ascending
    std::vector<double> samples;     // nonnegative amplitudes

    double spacing() const { return coordinates.size() > 1 ? coordinates[1] - coordinates[0] : 0.0; }
};

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

struct Lobe {
    double position = 0.0; // peak coordinate (sub-sample)
    double peak = 0.0;     // envelope amplitude at the peak
    double fwhm = 0.0;     // intensity FWHM in coordinate units
};

// Envelope of a raw sampled field along one axis. Throws AnalysisError when
// the window holds fewer than four carrier periods (2*pi per period in T,
// one wavelength per period in xi).
Envelope envelope_of(const std::vector<double>& field, const std::vector<double>& coords,
                     EnvelopeAxis axis);

Envelope envelope_space(const RunRecord& rec, double snapshot_ps,
                        std::optional<Range> xi_range = std::nullopt);
Envelope envelope_time(const RunRecord& rec, double probe_xi,
                       std::optional<Range> T_range = std::nullopt);

// Sub-sample peak location/height by parabolic refinement around the argmax.
struct PeakInfo {
    double position = 0.0;
    double value = 0.0;
    std::size_t index = 0;
};
PeakInfo envelope_peak(const Envelope& env);

// Intensity FWHM (half maximum of samples^2) around the dominant peak,
// linear-interpolated crossings. Throws on ambiguous equal maxima.
double intensity_fwhm(const Envelope& env);

// FWHM of the intensity envelope divided by the carrier period. For space
// envelopes the width maps onto time along the characteristic (xi -> 2*pi*xi)
// and is divided by vg.
double cycle_number(const Envelope& env, double vg = 1.0);

// Local maxima above threshold_frac * global peak with their local intensity
// FWHM, sorted by position. Empty when the envelope is identically zero.
std::vector<Lobe> detect_lobes(const Envelope& env, double threshold_frac = 0.1);

} // namespace gapsol
