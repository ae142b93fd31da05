// gapsol: run products — scheduled snapshots, probe time series and
// conserved-quantity traces, plus the configuration echo analysis needs.
#pragma once

#include <vector>

#include "gapsol/bloch.hpp"
#include "gapsol/grid.hpp"
#include "gapsol/medium.hpp"
#include "gapsol/pulse.hpp"
#include "gapsol/stepper.hpp"

namespace gapsol {

struct RecorderSchedule {
    std::vector<double> snapshot_times_ps;
    std::vector<double> probe_positions_xi;
    bool trace_conserved = false;
    long spectrum_probe_stride = 1; // time-step stride between probe samples
    long trace_stride = 1;          // time-step stride between conserved samples
};

struct Snapshot {
    double requested_ps = 0.0;
    double T = 0.0;       // actual dimensionless time recorded
    long step = 0;
    std::vector<double> E;
    std::vector<double> w;
};

struct ProbeSeries {
    double xi_requested = 0.0;
    double xi_actual = 0.0;
    long node = 0;
    long stride = 1;
    double sample_dT = 0.0; // stride * dT
    std::vector<double> E;  // samples at T = k * sample_dT, k = 0..
};

struct ConservedSample {
    double T = 0.0;
    double em_energy = 0.0;          // time-centered discrete energy
    double bloch_norm_max_dev = 0.0; // max |u^2+v^2+w^2-1| over medium cells
};

struct EnergySummary {
    double initial_total = 0.0; // sum(E^2+H^2)*dxi right after init
    double final_left = 0.0;    // xi < structure face at t_end
    double final_inside = 0.0;  // face <= xi < exit
    double final_right = 0.0;   // xi >= exit
    double final_total = 0.0;
    double transmitted_fraction = 0.0; // final_right / initial_total
};

struct RunRecord {
    Grid grid;
    MediumSpec medium;
    MediumProfile profile;
    PulseSpec pulse;
    RelaxationSpec relax;
    StepperConfig stepper;
    RecorderSchedule schedule;
    double t_end_ps = 0.0;
    long n_steps = 0;

    std::vector<Snapshot> snapshots;
    std::vector<ProbeSeries> probes;
    std::vector<ConservedSample> conserved;
    EnergySummary energy;

    double ps_to_T(double ps) const { return ps * 1000.0 * pulse.omega0; }
    double T_to_fs(double T) const { return T / pulse.omega0; }

    const Snapshot& snapshot_at(double requested_ps) const;
    const ProbeSeries& probe_at(double xi) const;
};

} // namespace gapsol
