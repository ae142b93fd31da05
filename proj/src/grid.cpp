#include "gapsol/grid.hpp"

#include <cmath>
#include <sstream>

namespace gapsol {

Grid build_grid(double dxi, double courant, double xi_min, double xi_max) {
    if (!(dxi > 0.0))
        throw ConfigError("grid: dxi must be positive");
    if (!(courant > 0.0) || courant > 1.0)
        throw ConfigError("grid: courant must lie in (0, 1]");
    if (!(xi_max > xi_min))
        throw ConfigError("grid: xi_max must exceed xi_min");

    const double ratio = (xi_max - xi_min) / dxi;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9) {
        std::ostringstream msg;
        msg << "grid: extent (xi_max - xi_min) = " << (xi_max - xi_min)
            << " is not divisible by dxi = " << dxi << " (ratio " << ratio << ")";
        throw ConfigError(msg.str());
    }
    if (rounded < 1.0)
        throw ConfigError("grid: need at least 2 nodes");

    Grid g;
    g.dxi = dxi;
    g.courant = courant;
    g.xi_min = xi_min;
    g.n_cells = long(rounded) + 1;
    g.dT = courant * kTwoPi * dxi;
    return g;
}

std::optional<std::string> courant_check(const Grid& grid) {
    const double ratio = grid.dT / (kTwoPi * grid.dxi);
    if (ratio > 1.0 + 1e-12) {
        std::ostringstream msg;
        msg << "grid: Courant ratio dT/(2*pi*dxi) = " << ratio << " exceeds 1";
        throw ConfigError(msg.str());
    }
    if (ratio > 0.9) {
        std::ostringstream msg;
        msg << "Courant ratio " << ratio << " is close to the stability bound";
        return msg.str();
    }
    return std::nullopt;
}

} // namespace gapsol
