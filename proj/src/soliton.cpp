#include "gapsol/soliton.hpp"

#include <cmath>

namespace gapsol {

namespace {
double sech(double x) {
    const double ax = std::abs(x);
    const double e = std::exp(-ax);
    return 2.0 * e / (1.0 + e * e);
}
} // namespace

double rabi_peak_forward(double vg, double tau, double omega0) {
    return omega0 * (1.0 + 1.0 / vg) / tau;
}

double rabi_peak_backward(double vg, double tau, double omega0) {
    return omega0 * (1.0 - 1.0 / vg) / tau;
}

double envelope_area_forward(double vg) { return M_PI * (1.0 + 1.0 / vg); }
double envelope_area_backward(double vg) { return M_PI * (1.0 - 1.0 / vg); }

double analytic_soliton_value(const SolitonParams& p, double omega0, double rabi0,
                              EnvelopeAxis axis, double coord) {
    if (!(p.vg > 0.0)) throw AnalysisError("analytic_soliton: vg must be positive");
    if (!(p.tau > 0.0)) throw AnalysisError("analytic_soliton: tau must be positive");

    const double amp = p.scale * rabi_peak_forward(p.vg, p.tau, omega0) / rabi0;
    if (axis == EnvelopeAxis::SpaceAtFixedT) {
        const double s = kTwoPi * (coord - p.center);
        return amp * sech(s / (p.vg * p.tau)) * std::cos(s + p.phi);
    }
    const double s = coord - p.center;
    return amp * sech(s / p.tau) * std::cos(p.phi - s);
}

std::vector<double> analytic_soliton(const SolitonParams& p, double omega0, double rabi0,
                                     EnvelopeAxis axis, const std::vector<double>& coords) {
    std::vector<double> out(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i)
        out[i] = analytic_soliton_value(p, omega0, rabi0, axis, coords[i]);
    return out;
}

} // namespace gapsol
