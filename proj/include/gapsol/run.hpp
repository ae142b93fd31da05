// gapsol: full-run driver for one configured simulation.
#pragma once

#include <functional>
#include <optional>

#include "gapsol/recorder.hpp"

namespace gapsol {

struct SimulationConfig {
    double dxi = 1.0 / 400.0;
    double courant = 0.5;
    double xi_min = 0.0;
    double xi_max = 0.0;
    MediumSpec medium;
    PulseSpec pulse;               // pulse.xi0 ignored when xi0 is unset below
    std::optional<double> xi0;     // explicit pulse center; default rule otherwise
    RelaxationSpec relax;
    StepperConfig stepper;
    RecorderSchedule schedule;
    double t_end_ps = 0.0;
};

// Builds grid/profile/pulse, validates the schedule, and steps to t_end,
// firing recorders at the nearest discrete steps (actual times recorded).
using ProgressFn = std::function<void(long step, long n_steps)>;
RunRecord run(const SimulationConfig& cfg, const ProgressFn& progress = nullptr);

// Validation helper shared by run() and config parsing: builds the grid and
// resolves xi0, throwing ConfigError on any inconsistency.
struct ResolvedSetup {
    Grid grid;
    MediumProfile profile;
    PulseSpec pulse; // xi0 resolved
    long n_steps = 0;
};
ResolvedSetup resolve_setup(const SimulationConfig& cfg);

} // namespace gapsol
