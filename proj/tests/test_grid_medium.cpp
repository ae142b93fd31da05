#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gapsol/grid.hpp"
#include "gapsol/medium.hpp"

using namespace gapsol;

TEST_CASE("build_grid computes dT and n_cells from the definition") {
    const Grid g = build_grid(1.0 / 400.0, 0.5, -20.0, 220.0);
    CHECK(g.dT == doctest::Approx(M_PI / 400.0).epsilon(1e-14));
    CHECK(g.n_cells == 96001);
    CHECK(g.courant == 0.5);
    CHECK(g.node_xi(0) == -20.0);
    CHECK(g.xi_max() == doctest::Approx(220.0).epsilon(1e-12));

    const Grid g2 = build_grid(0.1, 1.0, 0.0, 1.0);
    CHECK(g2.dT == doctest::Approx(0.2 * M_PI).epsilon(1e-14));
    CHECK(g2.n_cells == 11);
}

TEST_CASE("build_grid rejects a non-divisible extent") {
    CHECK_THROWS_AS(build_grid(0.3, 0.5, 0.0, 1.0), ConfigError);
    CHECK_THROWS_WITH_AS(build_grid(0.3, 0.5, 0.0, 1.0),
                         doctest::Contains("not divisible"), ConfigError);
}

TEST_CASE("build_grid validates parameters") {
    CHECK_THROWS_AS(build_grid(-0.1, 0.5, 0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(build_grid(0.1, 0.0, 0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(build_grid(0.1, 1.5, 0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(build_grid(0.1, 0.5, 1.0, 0.0), ConfigError);
}

TEST_CASE("courant_check flags the stability bound") {
    Grid g = build_grid(1.0 / 400.0, 0.5, 0.0, 1.0);
    CHECK(!courant_check(g).has_value()); // ratio 0.5: silent

    g.dT = 2.0 * M_PI / 400.0; // ratio 1.0: warning region boundary
    CHECK(courant_check(g).has_value());

    g.dT = 3.0 * M_PI / 400.0; // ratio 1.5: error
    CHECK_THROWS_AS(courant_check(g), ConfigError);
}

TEST_CASE("medium profile matches the layered definition at paper values") {
    // delta = 0.25, L = 108 at dxi = 1/400: 100 cells per layer, 216 periods.
    const Grid g = build_grid(1.0 / 400.0, 0.5, -2.0, 110.0);
    MediumSpec spec;
    spec.d = 0.2;
    spec.delta = 0.25;
    spec.length = 108.0;

    const MediumProfile prof = build_medium_profile(g, spec);
    REQUIRE(long(prof.omega_c.size()) == g.n_cells);

    // Left-closed: node exactly at xi = 0 is inside the first layer.
    const long face = g.nearest_node(0.0);
    CHECK(prof.omega_c[size_t(face)] == 0.2);
    CHECK(prof.omega_c[size_t(face) - 1] == 0.0);
    // Node at xi = 0.25 starts the gap.
    CHECK(prof.omega_c[size_t(face + 100)] == 0.0);
    CHECK(prof.omega_c[size_t(face + 99)] == 0.2);
    // Node exactly at xi = L is outside.
    const long exit = g.nearest_node(108.0);
    CHECK(prof.omega_c[size_t(exit)] == 0.0);

    CHECK(prof.blocks.size() == 216);

    SUBCASE("every value is exactly d or exactly 0") {
        for (double v : prof.omega_c) CHECK((v == 0.2 || v == 0.0));
    }

    SUBCASE("periodicity: repeated blocks are exactly equal") {
        const long period = 200; // 2*delta/dxi
        for (long i = face; i < exit - period; ++i)
            CHECK(prof.omega_c[size_t(i)] == prof.omega_c[size_t(i + period)]);
    }

    SUBCASE("half the structure cells carry atoms") {
        long nonzero = 0, total = 0;
        for (long i = face; i < exit; ++i) {
            ++total;
            if (prof.omega_c[size_t(i)] != 0.0) ++nonzero;
        }
        CHECK(total == 108 * 400);
        CHECK(nonzero * 2 == total);
    }
}

TEST_CASE("medium profile with delta = 0.1 gives 540 periods of 40 cells") {
    const Grid g = build_grid(1.0 / 400.0, 0.5, -2.0, 110.0);
    MediumSpec spec;
    spec.d = 0.2;
    spec.delta = 0.1;
    spec.length = 108.0;
    const MediumProfile prof = build_medium_profile(g, spec);
    CHECK(prof.blocks.size() == 540);
    for (const auto& [b, e] : prof.blocks) CHECK(e - b == 40);
}

TEST_CASE("vacuum medium: d = 0 gives an all-zero profile for any delta/L") {
    const Grid g = build_grid(1.0 / 400.0, 0.5, 0.0, 10.0);
    MediumSpec spec;
    spec.d = 0.0;
    spec.delta = 0.123; // intentionally misaligned; ignored for vacuum
    spec.length = 7.7;
    const MediumProfile prof = build_medium_profile(g, spec);
    CHECK(prof.blocks.empty());
    for (double v : prof.omega_c) CHECK(v == 0.0);
}

TEST_CASE("medium misalignment and period errors") {
    const Grid g = build_grid(1.0 / 400.0, 0.5, -2.0, 110.0);
    MediumSpec spec;
    spec.d = 0.2;
    spec.length = 108.0;

    spec.delta = 1.0 / 300.0; // 4/3 cells per layer
    CHECK_THROWS_AS(build_medium_profile(g, spec), ConfigError);

    spec.delta = 0.25;
    spec.length = 108.1; // not an even multiple of delta
    CHECK_THROWS_AS(build_medium_profile(g, spec), ConfigError);

    // delta = 0.3 (120 cells) and 0.21 (84 cells) are both valid.
    spec.delta = 0.3;
    spec.length = 108.0;
    CHECK_NOTHROW(build_medium_profile(g, spec));
    spec.delta = 0.21;
    spec.length = 0.42 * 250.0;
    CHECK_NOTHROW(build_medium_profile(g, spec));
}

TEST_CASE("medium profile with an off-grid xi_start still fills layers") {
    // xi_start = 0.35 puts layer boundaries exactly on grid nodes.
    const Grid g = build_grid(1.0 / 400.0, 0.5, 0.0, 4.0);
    MediumSpec spec;
    spec.d = 0.5;
    spec.delta = 0.25;
    spec.length = 2.0;
    spec.xi_start = 0.35;
    const MediumProfile prof = build_medium_profile(g, spec);
    CHECK(prof.blocks.size() == 4);
    const long start = g.nearest_node(0.35);
    CHECK(prof.omega_c[size_t(start)] == 0.5);
    CHECK(prof.omega_c[size_t(start) - 1] == 0.0);
}
