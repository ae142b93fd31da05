// gapsol: field and atomic state on the staggered grid at one time level.
// E and the Bloch triple live at integer time levels / E nodes; H lives at
// half nodes, half a time step ahead of E.
#pragma once

#include <vector>

#include "gapsol/grid.hpp"
#include "gapsol/medium.hpp"
#include "gapsol/pulse.hpp"

namespace gapsol {

struct SimState {
    std::vector<double> E; // n_cells, dimensionless (units of E0)
    std::vector<double> H; // n_cells - 1 half nodes
    std::vector<double> u; // polarization quadrature
    std::vector<double> v; // polarization quadrature
    std::vector<double> w; // inversion
    long t_index = 0;

    double time_T(const Grid& grid) const { return double(t_index) * grid.dT; }
};

// u = v = 0, w = -1 everywhere (all atoms in the ground state).
void init_bloch(const Grid& grid, std::vector<double>& u, std::vector<double>& v,
                std::vector<double>& w);

// Pulse in free space, atoms in the ground state, t_index = 0.
SimState make_initial_state(const Grid& grid, const PulseSpec& pulse,
                            const MediumSpec& medium);

// Max over medium cells of |u^2+v^2+w^2 - 1|; zero for vacuum profiles.
double max_bloch_norm_dev(const SimState& state, const MediumProfile& profile);

} // namespace gapsol
