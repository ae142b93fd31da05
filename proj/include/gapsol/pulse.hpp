// gapsol: initial few-cycle pulse with a hyperbolic-secant envelope,
//   E(0,xi) = cos[2*pi*(xi-xi0)] * sech[1.76*2*pi*(xi-xi0)/tau_p~]
// where tau_p~ = tau_p_fs * omega0 is the intensity-envelope FWHM in units
// of 1/omega0 (the 1.76 factor makes tau_p the intensity FWHM).
#pragma once

#include <optional>
#include <vector>

#include "gapsol/grid.hpp"
#include "gapsol/medium.hpp"

namespace gapsol {

struct PulseSpec {
    double omega0 = 2.3;         // carrier angular frequency, fs^-1
    double rabi0 = 1.4;          // peak Rabi frequency Omega0, fs^-1
    double tau_p_fs = 5.0;       // FWHM of the intensity envelope, fs
    double xi0 = 0.0;            // pulse-center position, units of lambda0
    double truncation_tol = 1e-6; // max envelope fraction allowed at the structure face

    double tau_dimless() const { return tau_p_fs * omega0; }
    // sech half-width parameter in xi: envelope = sech[(xi-xi0)/width].
    double sech_width_xi() const { return tau_dimless() / (1.76 * kTwoPi); }
    double envelope_xi(double xi) const;
    double waveform_xi(double xi) const;
};

// Default placement: 5 sech-widths of clearance from xi_min, pulled further
// left if needed so the envelope at the structure face stays below the
// truncation tolerance.
double default_xi0(const Grid& grid, const PulseSpec& pulse, double face_xi);

// Fills E at nodes and H at half nodes (shifted back dT/(4*pi) along the
// forward characteristic, placing H half a time step ahead of E).
// Validates pulse placement against the medium face.
void init_pulse(const Grid& grid, const PulseSpec& pulse, const MediumSpec& medium,
                std::vector<double>& E, std::vector<double>& H);

} // namespace gapsol
