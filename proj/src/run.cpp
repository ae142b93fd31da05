#include "gapsol/run.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace gapsol {

const Snapshot& RunRecord::snapshot_at(double requested_ps) const {
    for (const auto& s : snapshots)
        if (std::abs(s.requested_ps - requested_ps) < 1e-9)
            return s;
    std::ostringstream msg;
    msg << "no snapshot recorded at t = " << requested_ps << " ps";
    throw AnalysisError(msg.str());
}

const ProbeSeries& RunRecord::probe_at(double xi) const {
    for (const auto& p : probes)
        if (std::abs(p.xi_requested - xi) < 1e-9 || std::abs(p.xi_actual - xi) <= grid.dxi)
            return p;
    std::ostringstream msg;
    msg << "no probe recorded at xi = " << xi;
    throw AnalysisError(msg.str());
}

ResolvedSetup resolve_setup(const SimulationConfig& cfg) {
    ResolvedSetup setup;
    setup.grid = build_grid(cfg.dxi, cfg.courant, cfg.xi_min, cfg.xi_max);
    courant_check(setup.grid);
    setup.profile = build_medium_profile(setup.grid, cfg.medium);

    setup.pulse = cfg.pulse;
    setup.pulse.xi0 = cfg.xi0 ? *cfg.xi0
                              : default_xi0(setup.grid, setup.pulse, cfg.medium.xi_start);

    if (cfg.t_end_ps < 0.0)
        throw ConfigError("run: t_end_ps must be nonnegative");
    const double T_end = cfg.t_end_ps * 1000.0 * setup.pulse.omega0;
    setup.n_steps = long(std::ceil(T_end / setup.grid.dT - 1e-9));
    if (setup.n_steps < 0) setup.n_steps = 0;
    return setup;
}

RunRecord run(const SimulationConfig& cfg, const ProgressFn& progress) {
    ResolvedSetup setup = resolve_setup(cfg);
    const Grid& grid = setup.grid;
    const RecorderSchedule& sched = cfg.schedule;

    RunRecord rec;
    rec.grid = grid;
    rec.medium = cfg.medium;
    rec.profile = setup.profile;
    rec.pulse = setup.pulse;
    rec.relax = cfg.relax;
    rec.stepper = cfg.stepper;
    rec.schedule = sched;
    rec.t_end_ps = cfg.t_end_ps;
    rec.n_steps = setup.n_steps;

    // Snapshot schedule -> nearest step index; actual time recorded later.
    std::multimap<long, size_t> snapshot_steps;
    for (size_t si = 0; si < sched.snapshot_times_ps.size(); ++si) {
        const double t_ps = sched.snapshot_times_ps[si];
        const double T = t_ps * 1000.0 * setup.pulse.omega0;
        const long step = std::lround(T / grid.dT);
        if (step < 0 || step > setup.n_steps) {
            std::ostringstream msg;
            msg << "schedule: snapshot time " << t_ps << " ps is outside the run duration "
                << cfg.t_end_ps << " ps";
            throw ConfigError(msg.str());
        }
        snapshot_steps.emplace(step, si);
    }
    rec.snapshots.resize(sched.snapshot_times_ps.size());

    if (sched.spectrum_probe_stride < 1)
        throw ConfigError("schedule: spectrum_probe_stride must be >= 1");
    if (sched.trace_stride < 1)
        throw ConfigError("schedule: trace_stride must be >= 1");

    for (double xi : sched.probe_positions_xi) {
        if (!grid.contains(xi)) {
            std::ostringstream msg;
            msg << "schedule: probe position xi = " << xi << " is outside the grid";
            throw ConfigError(msg.str());
        }
        ProbeSeries p;
        p.xi_requested = xi;
        p.node = grid.nearest_node(xi);
        p.xi_actual = grid.node_xi(p.node);
        p.stride = sched.spectrum_probe_stride;
        p.sample_dT = double(p.stride) * grid.dT;
        p.E.reserve(size_t(setup.n_steps / p.stride) + 2);
        rec.probes.push_back(std::move(p));
    }

    SimState state = make_initial_state(grid, setup.pulse, cfg.medium);
    Stepper stepper(grid, setup.profile, setup.pulse, cfg.relax, cfg.stepper);

    rec.energy.initial_total = stepper.em_energy(state);

    auto record_due = [&](long step) {
        auto [lo, hi] = snapshot_steps.equal_range(step);
        for (auto it = lo; it != hi; ++it) {
            Snapshot& snap = rec.snapshots[it->second];
            snap.requested_ps = sched.snapshot_times_ps[it->second];
            snap.step = step;
            snap.T = double(step) * grid.dT;
            snap.E = state.E;
            snap.w = state.w;
        }
        for (auto& p : rec.probes)
            if (step % p.stride == 0)
                p.E.push_back(state.E[size_t(p.node)]);
    };

    record_due(0);

    const long report_every = std::max<long>(1, setup.n_steps / 100);
    for (long step = 1; step <= setup.n_steps; ++step) {
        const bool trace_now = sched.trace_conserved && (step % sched.trace_stride == 0);
        stepper.set_energy_trace(trace_now);
        stepper.step(state);
        if (trace_now) {
            ConservedSample c;
            c.T = state.time_T(grid);
            c.em_energy = stepper.last_centered_energy();
            c.bloch_norm_max_dev = max_bloch_norm_dev(state, setup.profile);
            rec.conserved.push_back(c);
        }
        record_due(step);
        if (progress && (step % report_every == 0 || step == setup.n_steps))
            progress(step, setup.n_steps);
    }

    const double face = cfg.medium.xi_start;
    const double exit = cfg.medium.xi_end();
    rec.energy.final_left = stepper.em_energy_in(state, grid.xi_min - 1.0, face);
    rec.energy.final_inside = stepper.em_energy_in(state, face, exit);
    rec.energy.final_right = stepper.em_energy_in(state, exit, grid.xi_max() + 1.0);
    rec.energy.final_total = stepper.em_energy(state);
    rec.energy.transmitted_fraction =
        rec.energy.initial_total > 0.0 ? rec.energy.final_right / rec.energy.initial_total : 0.0;

    return rec;
}

} // namespace gapsol
