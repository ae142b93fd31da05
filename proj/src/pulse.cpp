#include "gapsol/pulse.hpp"

#include <cmath>
#include <sstream>

namespace gapsol {

namespace {

// Overflow-safe sech.
double sech(double x) {
    const double ax = std::abs(x);
    const double e = std::exp(-ax);
    return 2.0 * e / (1.0 + e * e);
}

void validate(const PulseSpec& p) {
    if (!(p.omega0 > 0.0))
        throw ConfigError("pulse: omega0 must be positive");
    if (!(p.rabi0 > 0.0))
        throw ConfigError("pulse: Omega0 must be positive");
    if (!(p.tau_p_fs > 0.0))
        throw ConfigError("pulse: tau_p_fs must be positive");
    if (!(p.truncation_tol > 0.0) || p.truncation_tol >= 1.0)
        throw ConfigError("pulse: truncation tolerance must lie in (0, 1)");
}

} // namespace

double PulseSpec::envelope_xi(double xi) const {
    return sech((xi - xi0) / sech_width_xi());
}

double PulseSpec::waveform_xi(double xi) const {
    return std::cos(kTwoPi * (xi - xi0)) * envelope_xi(xi);
}

double default_xi0(const Grid& grid, const PulseSpec& pulse, double face_xi) {
    validate(pulse);
    const double a = pulse.sech_width_xi();
    const double candidate = grid.xi_min + 5.0 * a;
    // envelope(face) == tol at face - a*acosh(1/tol); keep strictly below.
    const double face_limit = face_xi - a * std::acosh(1.0 / pulse.truncation_tol) - 1e-9;
    return std::min(candidate, face_limit);
}

void init_pulse(const Grid& grid, const PulseSpec& pulse, const MediumSpec& medium,
                std::vector<double>& E, std::vector<double>& H) {
    validate(pulse);
    if (!(pulse.xi0 > grid.xi_min) || !(pulse.xi0 < grid.xi_max()))
        throw ConfigError("pulse: xi0 must lie inside the grid");

    if (!medium.vacuum()) {
        const double face_env = pulse.envelope_xi(medium.xi_start);
        if (face_env > pulse.truncation_tol) {
            std::ostringstream msg;
            msg << "pulse: envelope at the structure face (xi = " << medium.xi_start
                << ") is " << face_env << ", above the truncation tolerance "
                << pulse.truncation_tol;
            throw ConfigError(msg.str());
        }
    }

    E.assign(size_t(grid.n_cells), 0.0);
    H.assign(size_t(grid.n_cells - 1), 0.0);
    for (long i = 0; i < grid.n_cells; ++i)
        E[size_t(i)] = pulse.waveform_xi(grid.node_xi(i));

    // Rightward free-space wave: H equals E along the forward characteristic,
    // sampled half a time step ahead at the half nodes.
    const double shift = grid.dT / (2.0 * kTwoPi);
    for (long i = 0; i + 1 < grid.n_cells; ++i)
        H[size_t(i)] = pulse.waveform_xi(grid.half_node_xi(i) - shift);
}

} // namespace gapsol
