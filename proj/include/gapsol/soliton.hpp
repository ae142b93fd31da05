// gapsol: analytic sech-form gap-soliton solution of the coupled-mode theory,
// forward wave
//   space: (omega0/tau)(1+1/vg) sech[2*pi*(xi-xi_m)/(vg*tau)] cos(2*pi*(xi-xi_m)+phi)
//   time:  (omega0/tau)(1+1/vg) sech[(T-T_m)/tau]            cos(phi-(T-T_m))
// returned in the dimensionless field units of E (Rabi amplitude / Omega0).
#pragma once

#include <vector>

#include "gapsol/envelope.hpp"
#include "gapsol/grid.hpp"

namespace gapsol {

struct SolitonParams {
    double vg = 0.9;     // group velocity, units of c
    double tau = 2.5;    // pulse duration, units of 1/omega0
    double center = 0.0; // xi_m (space) or T_m (time)
    double phi = 0.0;    // carrier phase, radians
    double scale = 1.0;  // overall amplitude factor on top of the analytic peak
};

// Peak Rabi amplitudes of the forward/backward waves, fs^-1.
double rabi_peak_forward(double vg, double tau, double omega0);
double rabi_peak_backward(double vg, double tau, double omega0);

// Envelope areas A+- = pi*(1 +- 1/vg); their sum is 2*pi for any vg.
double envelope_area_forward(double vg);
double envelope_area_backward(double vg);

double analytic_soliton_value(const SolitonParams& p, double omega0, double rabi0,
                              EnvelopeAxis axis, double coord);
std::vector<double> analytic_soliton(const SolitonParams& p, double omega0, double rabi0,
                                     EnvelopeAxis axis, const std::vector<double>& coords);

} // namespace gapsol
