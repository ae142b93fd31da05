#include "gapsol/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gapsol/fft.hpp"

namespace gapsol {

SpectrumWindow parse_window(const std::string& name) {
    if (name == "hann") return SpectrumWindow::Hann;
    if (name == "rectangular") return SpectrumWindow::Rectangular;
    throw ConfigError("spectrum: unknown window '" + name + "' (expected hann or rectangular)");
}

namespace {

// Pad so the interpolated bin spacing resolves 0.002 carrier units, capped.
std::size_t fft_length(std::size_t n, double sample_spacing, double carrier_unit) {
    const double want = carrier_unit / (0.002 * sample_spacing);
    std::size_t m = next_pow2(std::max<std::size_t>(n, std::size_t(std::min(want, 4194304.0))));
    return m;
}

Spectrum make_spectrum(std::vector<double> series, double sample_spacing,
                       double carrier_unit, SpectrumWindow window) {
    const std::size_t n = series.size();
    if (window == SpectrumWindow::Hann) {
        for (std::size_t i = 0; i < n; ++i) {
            const double x = double(i) / double(n - 1);
            series[i] *= 0.5 - 0.5 * std::cos(kTwoPi * x);
        }
    }
    const std::size_t m = fft_length(n, sample_spacing, carrier_unit);
    std::vector<std::complex<double>> buf(m, {0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) buf[i] = {series[i], 0.0};
    fft(buf, false);

    Spectrum spec;
    spec.frequencies.resize(m / 2 + 1);
    spec.power.resize(m / 2 + 1);
    double peak = 0.0;
    for (std::size_t k = 0; k <= m / 2; ++k) {
        spec.frequencies[k] = carrier_unit * double(k) / (double(m) * sample_spacing);
        spec.power[k] = std::norm(buf[k]);
        peak = std::max(peak, spec.power[k]);
    }
    if (peak > 0.0)
        for (auto& p : spec.power) p /= peak;
    return spec;
}

} // namespace

double Spectrum::peak_frequency() const {
    if (power.empty()) throw AnalysisError("spectrum: empty");
    std::size_t kmax = 0;
    for (std::size_t k = 1; k < power.size(); ++k)
        if (power[k] > power[kmax]) kmax = k;
    double f = frequencies[kmax];
    if (kmax > 0 && kmax + 1 < power.size() && power[kmax] > 0.0) {
        const double y0 = power[kmax - 1], y1 = power[kmax], y2 = power[kmax + 1];
        const double denom = y0 - 2.0 * y1 + y2;
        if (denom < 0.0)
            f += 0.5 * (y0 - y2) / denom * bin_width();
    }
    return f;
}

Spectrum spectrum_probe(const RunRecord& rec, double probe_xi, SpectrumWindow window,
                        std::optional<Range> gate_T) {
    const ProbeSeries& probe = rec.probe_at(probe_xi);

    std::size_t k0 = 0, k1 = probe.E.size();
    if (gate_T) {
        k0 = std::size_t(std::max(0.0, std::ceil(gate_T->lo / probe.sample_dT - 1e-9)));
        k1 = std::min<std::size_t>(probe.E.size(),
                                   std::size_t(std::floor(gate_T->hi / probe.sample_dT + 1e-9)) + 1);
        if (k1 <= k0) throw AnalysisError("spectrum: empty gate window");
    }
    std::vector<double> series(probe.E.begin() + long(k0), probe.E.begin() + long(k1));
    if (series.size() < 1024) {
        std::ostringstream msg;
        msg << "spectrum: probe series holds " << series.size()
            << " samples after gating; at least 1024 required";
        throw AnalysisError(msg.str());
    }

    // Carrier e^{-iT}: angular frequency 1 in units of omega0 maps to
    // 1/(2*pi) cycles per unit T.
    Spectrum spec = make_spectrum(std::move(series), probe.sample_dT, kTwoPi, window);
    spec.probe_xi = probe.xi_actual;
    spec.gate_T = gate_T;
    return spec;
}

Spectrum spectrum_snapshot(const RunRecord& rec, double snapshot_ps, SpectrumWindow window,
                           std::optional<Range> xi_range) {
    const Snapshot& snap = rec.snapshot_at(snapshot_ps);
    long i0 = 0, i1 = rec.grid.n_cells;
    if (xi_range) {
        i0 = std::clamp<long>(long(std::ceil((xi_range->lo - rec.grid.xi_min) / rec.grid.dxi - 1e-9)),
                              0, rec.grid.n_cells);
        i1 = std::clamp<long>(long(std::floor((xi_range->hi - rec.grid.xi_min) / rec.grid.dxi + 1e-9)) + 1,
                              0, rec.grid.n_cells);
    }
    std::vector<double> series(snap.E.begin() + i0, snap.E.begin() + i1);
    if (series.size() < 1024)
        throw AnalysisError("spectrum: snapshot slice holds fewer than 1024 samples");

    // Carrier cos(2*pi*xi): wavenumber 2*pi maps to 1.0.
    Spectrum spec = make_spectrum(std::move(series), rec.grid.dxi, 1.0, window);
    spec.probe_xi = snap.T;
    return spec;
}

Range auto_reflected_gate(const RunRecord& rec) {
    const double T_face = kTwoPi * (rec.medium.xi_start - rec.pulse.xi0);
    return Range{T_face, double(rec.n_steps) * rec.grid.dT};
}

} // namespace gapsol
