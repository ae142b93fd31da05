// gapsol: windowed power spectra of probe time series and spatial snapshots,
// reported in carrier units (omega/omega0, or wavenumber/2*pi for space).
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gapsol/envelope.hpp"
#include "gapsol/recorder.hpp"

namespace gapsol {

enum class SpectrumWindow { Rectangular, Hann };

SpectrumWindow parse_window(const std::string& name);

struct Spectrum {
    std::vector<double> frequencies; // units of omega0 (or carrier wavenumber)
    std::vector<double> power;       // |amplitude|^2, normalized to unit peak
    double probe_xi = 0.0;           // probe position or snapshot time tag
    std::optional<Range> gate_T;     // time gate applied before windowing

    // Peak frequency with parabolic sub-bin refinement.
    double peak_frequency() const;
    double bin_width() const { return frequencies.size() > 1 ? frequencies[1] - frequencies[0] : 0.0; }
};

// Probe series must hold at least 2^10 samples after gating.
Spectrum spectrum_probe(const RunRecord& rec, double probe_xi,
                        SpectrumWindow window = SpectrumWindow::Hann,
                        std::optional<Range> gate_T = std::nullopt);

Spectrum spectrum_snapshot(const RunRecord& rec, double snapshot_ps,
                           SpectrumWindow window = SpectrumWindow::Hann,
                           std::optional<Range> xi_range = std::nullopt);

// Gate for a reflected-wave probe left of the input face: opens when the
// incident pulse center reaches the face, after the incident has cleared the
// probe on its way in.
Range auto_reflected_gate(const RunRecord& rec);

} // namespace gapsol
