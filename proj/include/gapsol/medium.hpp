// gapsol: layered resonant medium. Coupling strength omega_c(xi) equals d
// (fs^-1) inside layers [2n*delta, 2n*delta + delta) measured from xi_start
// and zero in between, for n in [0, L/(2*delta)).
#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "gapsol/grid.hpp"

namespace gapsol {

struct MediumSpec {
    double d = 0.0;        // coupling amplitude inside a layer, fs^-1
    double delta = 0.25;   // layer thickness, units of lambda0
    double length = 0.0;   // structure length L, units of lambda0
    double xi_start = 0.0; // left face position

    bool vacuum() const { return d == 0.0 || length == 0.0; }
    double xi_end() const { return xi_start + length; }
    long n_periods() const { return std::lround(length / (2.0 * delta)); }
};

struct MediumProfile {
    std::vector<double> omega_c;                 // per E node, fs^-1 (exactly d or 0)
    std::vector<std::pair<long, long>> blocks;   // [begin, end) node ranges with omega_c > 0
    bool any() const { return !blocks.empty(); }
};

// Samples omega_c at E nodes with a left-closed convention at layer edges.
// Requires delta/dxi and L/(2*delta) integral (within 1e-9) unless d == 0.
MediumProfile build_medium_profile(const Grid& grid, const MediumSpec& spec);

} // namespace gapsol
