#include "gapsol/sim_state.hpp"

#include <cmath>

namespace gapsol {

void init_bloch(const Grid& grid, std::vector<double>& u, std::vector<double>& v,
                std::vector<double>& w) {
    u.assign(size_t(grid.n_cells), 0.0);
    v.assign(size_t(grid.n_cells), 0.0);
    w.assign(size_t(grid.n_cells), -1.0);
}

SimState make_initial_state(const Grid& grid, const PulseSpec& pulse,
                            const MediumSpec& medium) {
    SimState s;
    init_pulse(grid, pulse, medium, s.E, s.H);
    init_bloch(grid, s.u, s.v, s.w);
    s.t_index = 0;
    return s;
}

double max_bloch_norm_dev(const SimState& state, const MediumProfile& profile) {
    double dev = 0.0;
    for (const auto& [begin, end] : profile.blocks) {
        for (long i = begin; i < end; ++i) {
            const size_t k = size_t(i);
            const double n2 = state.u[k] * state.u[k] + state.v[k] * state.v[k] +
                              state.w[k] * state.w[k];
            dev = std::max(dev, std::abs(n2 - 1.0));
        }
    }
    return dev;
}

} // namespace gapsol
