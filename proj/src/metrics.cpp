#include "gapsol/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gapsol {

GroupVelocityResult group_velocity(const RunRecord& rec, double t1_ps, double t2_ps,
                                   std::optional<Range> xi_range, double lobe_threshold) {
    if (t2_ps <= t1_ps)
        throw AnalysisError("group_velocity: t2 must exceed t1");
    Envelope env1 = envelope_space(rec, t1_ps, xi_range);
    Envelope env2 = envelope_space(rec, t2_ps, xi_range);

    auto lobes1 = detect_lobes(env1, lobe_threshold);
    auto lobes2 = detect_lobes(env2, lobe_threshold);
    if (lobes1.empty() || lobes2.empty())
        throw AnalysisError("group_velocity: no envelope peak in one of the snapshots");

    const double dT = rec.ps_to_T(t2_ps) - rec.ps_to_T(t1_ps);

    GroupVelocityResult out;
    out.split = lobes1.size() > 1 || lobes2.size() > 1;

    auto by_strength = [](std::vector<Lobe> lobes) {
        std::sort(lobes.begin(), lobes.end(),
                  [](const Lobe& a, const Lobe& b) { return a.peak > b.peak; });
        return lobes;
    };
    auto s1 = by_strength(lobes1);
    auto s2 = by_strength(lobes2);
    const std::size_t n = std::min(s1.size(), s2.size());
    for (std::size_t k = 0; k < n; ++k) {
        LobeVelocity lv;
        lv.label = "lobe" + std::to_string(k);
        lv.xi1 = s1[k].position;
        lv.xi2 = s2[k].position;
        lv.vg = kTwoPi * (lv.xi2 - lv.xi1) / dT;
        out.lobes.push_back(lv);
    }
    out.vg = out.lobes.front().vg;
    return out;
}

double pulse_area(const Envelope& env, double rabi0, double omega0, double vg) {
    if (!(vg > 0.0)) throw AnalysisError("pulse_area: vg must be positive");
    if (env.samples.size() < 2) throw AnalysisError("pulse_area: envelope too short");

    double peak = 0.0;
    for (double s : env.samples) peak = std::max(peak, s);
    if (peak <= 0.0) throw AnalysisError("pulse_area: zero envelope");
    if (env.samples.front() > 0.01 * peak || env.samples.back() > 0.01 * peak) {
        std::ostringstream msg;
        msg << "pulse_area: envelope clipped by the window (edges "
            << env.samples.front() / peak << ", " << env.samples.back() / peak
            << " of peak)";
        throw AnalysisError(msg.str());
    }

    double sum = 0.0;
    for (double s : env.samples) sum += s;
    double dT = env.spacing();
    if (env.axis == EnvelopeAxis::SpaceAtFixedT)
        dT *= kTwoPi / vg;
    return (rabi0 / omega0) * sum * dT;
}

InversionStats inversion_stats(const RunRecord& rec, double snapshot_ps) {
    const Snapshot& snap = rec.snapshot_at(snapshot_ps);
    InversionStats stats;
    if (rec.medium.vacuum())
        return stats;

    const long n_layers = rec.medium.n_periods();
    double mean_lo = 1.0, mean_hi = -1.0;
    for (long n = 0; n < n_layers; ++n) {
        const double a = rec.medium.xi_start + 2.0 * double(n) * rec.medium.delta;
        const double b = a + rec.medium.delta;
        LayerStats ls;
        ls.layer = n;
        ls.xi_begin = a;
        double sum = 0.0, maxw = -2.0;
        long count = 0;
        for (long i = 0; i < rec.grid.n_cells; ++i) {
            if (rec.profile.omega_c[size_t(i)] == 0.0) continue;
            const double xi = rec.grid.node_xi(i);
            if (xi < a - 1e-12 || xi >= b - 1e-12) continue;
            sum += snap.w[size_t(i)];
            maxw = std::max(maxw, snap.w[size_t(i)]);
            ++count;
        }
        if (count == 0) continue;
        ls.mean_w = sum / double(count);
        ls.max_w = maxw;
        stats.global_max_w = std::max(stats.global_max_w, maxw);
        mean_lo = std::min(mean_lo, ls.mean_w);
        mean_hi = std::max(mean_hi, ls.mean_w);
        if (ls.max_w > 0.0) stats.inverted_layers.push_back(n);
        stats.layers.push_back(ls);
    }
    if (!stats.layers.empty())
        stats.mean_w_spread = mean_hi - mean_lo;
    return stats;
}

double shape_correlation(const RunRecord& rec, double t1_ps, double t2_ps,
                         std::optional<Range> xi_range) {
    Envelope e1 = envelope_space(rec, t1_ps, xi_range);
    Envelope e2 = envelope_space(rec, t2_ps, xi_range);
    const PeakInfo p1 = envelope_peak(e1);
    const PeakInfo p2 = envelope_peak(e2);
    const double fwhm = std::max(intensity_fwhm(e1), intensity_fwhm(e2));
    const double half_window = 8.0 * fwhm;

    const long shift = long(p2.index) - long(p1.index);
    double s11 = 0.0, s22 = 0.0, s12 = 0.0;
    const long n1 = long(e1.samples.size());
    for (long i = 0; i < n1; ++i) {
        const long j = i + shift;
        if (j < 0 || j >= long(e2.samples.size())) continue;
        if (std::abs(e1.coordinates[size_t(i)] - p1.position) > half_window) continue;
        const double a = e1.samples[size_t(i)];
        const double b = e2.samples[size_t(j)];
        s11 += a * a;
        s22 += b * b;
        s12 += a * b;
    }
    if (s11 <= 0.0 || s22 <= 0.0)
        throw AnalysisError("shape_correlation: empty overlap window");
    return s12 / std::sqrt(s11 * s22);
}

} // namespace gapsol
