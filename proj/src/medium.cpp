#include "gapsol/medium.hpp"

#include <cmath>
#include <sstream>

namespace gapsol {

MediumProfile build_medium_profile(const Grid& grid, const MediumSpec& spec) {
    MediumProfile profile;
    profile.omega_c.assign(size_t(grid.n_cells), 0.0);

    if (spec.d < 0.0)
        throw ConfigError("medium: d must be nonnegative");
    if (spec.d == 0.0)
        return profile; // vacuum regardless of delta/L

    if (!(spec.delta > 0.0))
        throw ConfigError("medium: delta must be positive");
    if (!(spec.length > 0.0))
        throw ConfigError("medium: L must be positive");

    const double cells_ratio = spec.delta / grid.dxi;
    const double cells_rounded = std::round(cells_ratio);
    if (std::abs(cells_ratio - cells_rounded) > 1e-9) {
        std::ostringstream msg;
        msg << "medium: delta = " << spec.delta << " is not an integer number of cells"
            << " (delta/dxi = " << cells_ratio << ")";
        throw ConfigError(msg.str());
    }
    const long cells_per_layer = long(cells_rounded);
    if (cells_per_layer < 1)
        throw ConfigError("medium: delta must span at least one cell");

    const double periods_ratio = spec.length / (2.0 * spec.delta);
    const double periods_rounded = std::round(periods_ratio);
    if (std::abs(periods_ratio - periods_rounded) > 1e-9) {
        std::ostringstream msg;
        msg << "medium: L = " << spec.length << " is not an even multiple of delta = "
            << spec.delta << " (L/(2*delta) = " << periods_ratio << ")";
        throw ConfigError(msg.str());
    }
    const long n_periods = long(periods_rounded);
    const long period_cells = 2 * cells_per_layer;
    const long total_cells = n_periods * period_cells;

    // Position in whole cells from the left face; layer boundaries land on the
    // cell lattice, so a small positive nudge realizes the left-closed rule at
    // coincident node coordinates.
    long open_begin = -1;
    for (long i = 0; i < grid.n_cells; ++i) {
        const double offset = (grid.node_xi(i) - spec.xi_start) / grid.dxi;
        const long c = long(std::floor(offset + 1e-6));
        const bool in_layer = c >= 0 && c < total_cells && (c % period_cells) < cells_per_layer;
        if (in_layer) {
            profile.omega_c[size_t(i)] = spec.d;
            if (open_begin < 0) open_begin = i;
        } else if (open_begin >= 0) {
            profile.blocks.emplace_back(open_begin, i);
            open_begin = -1;
        }
    }
    if (open_begin >= 0)
        profile.blocks.emplace_back(open_begin, grid.n_cells);

    return profile;
}

} // namespace gapsol
