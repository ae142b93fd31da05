// gapsol: uniform staggered 1D grid in dimensionless coordinates T = t*omega0,
// xi = z/lambda0. Light covers one cell in dT = 2*pi*dxi, so the Courant
// ratio is dT/(2*pi*dxi).
#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "gapsol/errors.hpp"

namespace gapsol {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Grid {
    double dxi = 1.0 / 400.0; // cell width, units of lambda0
    long n_cells = 0;         // number of E nodes
    double xi_min = 0.0;      // coordinate of E node 0
    double dT = 0.0;          // time step, units of 1/omega0
    double courant = 0.5;     // dT/(2*pi*dxi)

    double node_xi(long i) const { return xi_min + double(i) * dxi; }
    double half_node_xi(long i) const { return xi_min + (double(i) + 0.5) * dxi; }
    double xi_max() const { return node_xi(n_cells - 1); }
    long nearest_node(double xi) const { return std::lround((xi - xi_min) / dxi); }
    bool contains(double xi) const { return xi >= xi_min && xi <= xi_max(); }
};

// n_cells = (xi_max - xi_min)/dxi + 1; the extent must divide evenly.
Grid build_grid(double dxi, double courant, double xi_min, double xi_max);

// Throws ConfigError when dT/(2*pi*dxi) > 1; returns a warning string above 0.9.
std::optional<std::string> courant_check(const Grid& grid);

} // namespace gapsol
