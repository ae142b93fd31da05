#include "gapsol/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gapsol/fft.hpp"

namespace gapsol {

namespace {

double carrier_period(EnvelopeAxis axis) {
    return axis == EnvelopeAxis::TimeAtFixedXi ? kTwoPi : 1.0;
}

// Slice [i0, i1) of a snapshot restricted to a coordinate range.
std::pair<long, long> range_to_indices(const Grid& grid, const Range& r) {
    long i0 = long(std::ceil((r.lo - grid.xi_min) / grid.dxi - 1e-9));
    long i1 = long(std::floor((r.hi - grid.xi_min) / grid.dxi + 1e-9)) + 1;
    i0 = std::clamp<long>(i0, 0, grid.n_cells);
    i1 = std::clamp<long>(i1, 0, grid.n_cells);
    return {i0, i1};
}

} // namespace

Envelope envelope_of(const std::vector<double>& field, const std::vector<double>& coords,
                     EnvelopeAxis axis) {
    if (field.size() != coords.size() || field.size() < 2)
        throw AnalysisError("envelope: field and coordinate arrays must match and hold >= 2 samples");
    const double span = coords.back() - coords.front();
    if (span < 4.0 * carrier_period(axis)) {
        std::ostringstream msg;
        msg << "envelope: window spans " << span / carrier_period(axis)
            << " carrier periods; at least 4 required";
        throw AnalysisError(msg.str());
    }

    auto z = analytic_signal(field);
    Envelope env;
    env.axis = axis;
    env.coordinates = coords;
    env.samples.resize(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) env.samples[i] = std::abs(z[i]);
    return env;
}

Envelope envelope_space(const RunRecord& rec, double snapshot_ps, std::optional<Range> xi_range) {
    const Snapshot& snap = rec.snapshot_at(snapshot_ps);
    long i0 = 0, i1 = rec.grid.n_cells;
    if (xi_range) std::tie(i0, i1) = range_to_indices(rec.grid, *xi_range);
    if (i1 - i0 < 2) throw AnalysisError("envelope: empty xi range");

    std::vector<double> field(snap.E.begin() + i0, snap.E.begin() + i1);
    std::vector<double> coords(size_t(i1 - i0));
    for (long i = i0; i < i1; ++i) coords[size_t(i - i0)] = rec.grid.node_xi(i);
    return envelope_of(field, coords, EnvelopeAxis::SpaceAtFixedT);
}

Envelope envelope_time(const RunRecord& rec, double probe_xi, std::optional<Range> T_range) {
    const ProbeSeries& probe = rec.probe_at(probe_xi);
    std::size_t k0 = 0, k1 = probe.E.size();
    if (T_range) {
        k0 = std::size_t(std::max(0.0, std::ceil(T_range->lo / probe.sample_dT - 1e-9)));
        k1 = std::min<std::size_t>(probe.E.size(),
                                   std::size_t(std::floor(T_range->hi / probe.sample_dT + 1e-9)) + 1);
    }
    if (k1 <= k0 + 1) throw AnalysisError("envelope: empty probe window");

    std::vector<double> field(probe.E.begin() + long(k0), probe.E.begin() + long(k1));
    std::vector<double> coords(k1 - k0);
    for (std::size_t k = k0; k < k1; ++k) coords[k - k0] = double(k) * probe.sample_dT;
    return envelope_of(field, coords, EnvelopeAxis::TimeAtFixedXi);
}

PeakInfo envelope_peak(const Envelope& env) {
    const auto& s = env.samples;
    if (s.empty()) throw AnalysisError("envelope: empty");
    std::size_t imax = 0;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i] > s[imax]) imax = i;
    if (s[imax] <= 0.0) throw AnalysisError("envelope: no peak (zero field)");

    PeakInfo p;
    p.index = imax;
    p.position = env.coordinates[imax];
    p.value = s[imax];
    if (imax > 0 && imax + 1 < s.size()) {
        const double y0 = s[imax - 1], y1 = s[imax], y2 = s[imax + 1];
        const double denom = y0 - 2.0 * y1 + y2;
        if (denom < 0.0) {
            const double frac = 0.5 * (y0 - y2) / denom;
            p.position += frac * env.spacing();
            p.value = y1 - 0.25 * (y0 - y2) * frac;
        }
    }
    return p;
}

namespace {

// Half-maximum crossings of samples^2 nearest the peak on each side.
// Returns the width in coordinate units; edges clamp to the window.
double local_intensity_fwhm(const Envelope& env, std::size_t ipk) {
    const auto& s = env.samples;
    const double half = 0.5 * s[ipk] * s[ipk];
    const double dx = env.spacing();

    double left = env.coordinates.front();
    for (std::size_t i = ipk; i > 0; --i) {
        const double a = s[i - 1] * s[i - 1], b = s[i] * s[i];
        if (a <= half && b >= half) {
            const double frac = (b - half) / std::max(b - a, 1e-300);
            left = env.coordinates[i] - frac * dx;
            break;
        }
    }
    double right = env.coordinates.back();
    for (std::size_t i = ipk; i + 1 < s.size(); ++i) {
        const double a = s[i] * s[i], b = s[i + 1] * s[i + 1];
        if (a >= half && b <= half) {
            const double frac = (a - half) / std::max(a - b, 1e-300);
            right = env.coordinates[i] + frac * dx;
            break;
        }
    }
    return right - left;
}

} // namespace

double intensity_fwhm(const Envelope& env) {
    PeakInfo pk = envelope_peak(env);
    // Ambiguity: another separated local maximum within 0.1% of the global.
    const auto& s = env.samples;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        if (i == pk.index) continue;
        if (s[i] >= s[i - 1] && s[i] >= s[i + 1] &&
            std::abs(s[i] - pk.value) <= 1e-3 * pk.value &&
            std::abs(env.coordinates[i] - pk.position) > 4.0 * env.spacing()) {
            std::ostringstream msg;
            msg << "envelope: multiple equal maxima near " << pk.position << " and "
                << env.coordinates[i];
            throw AnalysisError(msg.str());
        }
    }
    return local_intensity_fwhm(env, pk.index);
}

double cycle_number(const Envelope& env, double vg) {
    if (!(vg > 0.0)) throw AnalysisError("cycle_number: vg must be positive");
    double fwhm_T = intensity_fwhm(env);
    if (env.axis == EnvelopeAxis::SpaceAtFixedT)
        fwhm_T *= kTwoPi / vg;
    return fwhm_T / kTwoPi;
}

std::vector<Lobe> detect_lobes(const Envelope& env, double threshold_frac) {
    if (!(threshold_frac > 0.0) || threshold_frac >= 1.0)
        throw AnalysisError("detect_lobes: threshold must lie in (0, 1)");
    const auto& s = env.samples;
    std::vector<Lobe> lobes;
    if (s.size() < 3) return lobes;

    double global = 0.0;
    for (double x : s) global = std::max(global, x);
    if (global <= 0.0) return lobes;
    const double thr = threshold_frac * global;

    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        if (s[i] < thr) continue;
        if (!(s[i] > s[i - 1])) continue;
        // walk plateaus rightward
        std::size_t j = i;
        while (j + 1 < s.size() && s[j + 1] == s[j]) ++j;
        if (j + 1 >= s.size() || s[j + 1] > s[j]) continue;
        const std::size_t ipk = (i + j) / 2;

        Lobe lobe;
        PeakInfo pk;
        pk.index = ipk;
        pk.position = env.coordinates[ipk];
        pk.value = s[ipk];
        if (ipk > 0 && ipk + 1 < s.size()) {
            const double y0 = s[ipk - 1], y1 = s[ipk], y2 = s[ipk + 1];
            const double denom = y0 - 2.0 * y1 + y2;
            if (denom < 0.0) {
                const double frac = 0.5 * (y0 - y2) / denom;
                pk.position += frac * env.spacing();
                pk.value = y1 - 0.25 * (y0 - y2) * frac;
            }
        }
        lobe.position = pk.position;
        lobe.peak = pk.value;
        lobe.fwhm = local_intensity_fwhm(env, ipk);
        lobes.push_back(lobe);
    }
    std::sort(lobes.begin(), lobes.end(),
              [](const Lobe& a, const Lobe& b) { return a.position < b.position; });
    return lobes;
}

} // namespace gapsol
