#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gapsol/stepper.hpp"

using namespace gapsol;

namespace {

PulseSpec short_pulse(double xi0) {
    PulseSpec p;
    p.omega0 = 2.3;
    p.rabi0 = 1.4;
    p.tau_p_fs = 2.0;
    p.xi0 = xi0;
    return p;
}

// Independent fine-step integrator for the three Bloch equations, written
// against the equations directly (not the production cell stepper).
struct BlochOracle {
    double g1, g2, a;

    void derivative(const double x[3], double dx[3]) const {
        dx[0] = -g2 * x[0] - x[1];
        dx[1] = -g2 * x[1] + x[0] + a * x[2];
        dx[2] = -g1 * (x[2] + 1.0) - a * x[1];
    }

    void advance(double x[3], double h, int substeps) const {
        const double hs = h / double(substeps);
        for (int s = 0; s < substeps; ++s) {
            double k1[3], k2[3], k3[3], k4[3], t[3];
            derivative(x, k1);
            for (int i = 0; i < 3; ++i) t[i] = x[i] + 0.5 * hs * k1[i];
            derivative(t, k2);
            for (int i = 0; i < 3; ++i) t[i] = x[i] + 0.5 * hs * k2[i];
            derivative(t, k3);
            for (int i = 0; i < 3; ++i) t[i] = x[i] + hs * k3[i];
            derivative(t, k4);
            for (int i = 0; i < 3; ++i)
                x[i] += hs / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
};

} // namespace

TEST_CASE("Bloch cell stepper matches a dT/100 ODE oracle over 1000 steps") {
    const double h = M_PI / 400.0;
    const double kappa = 2.0 * 1.4 / 2.3;
    const double a = kappa * 0.5; // prescribed constant E = 0.5

    BlochOracle oracle{0.0, 0.0, a};
    double ref[3] = {0.0, 0.0, -1.0};
    double u = 0.0, v = 0.0, w = -1.0;
    double max_err = 0.0;
    for (int n = 0; n < 1000; ++n) {
        bloch_rk4_step(u, v, w, a, 0.0, 0.0, h);
        oracle.advance(ref, h, 100);
        max_err = std::max({max_err, std::abs(u - ref[0]), std::abs(v - ref[1]),
                            std::abs(w - ref[2])});
    }
    CHECK(max_err <= 1e-6);
}

TEST_CASE("Crank-Nicolson cell stepper: second-order accurate, norm exact") {
    const double h = M_PI / 400.0;
    const double a = 2.0 * 1.4 / 2.3 * 0.5;
    BlochOracle oracle{0.0, 0.0, a};
    double ref[3] = {0.0, 0.0, -1.0};
    double u = 0.0, v = 0.0, w = -1.0;
    double max_err = 0.0, max_norm_dev = 0.0;
    for (int n = 0; n < 1000; ++n) {
        bloch_cn_step(u, v, w, a, 0.0, 0.0, h);
        oracle.advance(ref, h, 100);
        max_err = std::max({max_err, std::abs(u - ref[0]), std::abs(v - ref[1]),
                            std::abs(w - ref[2])});
        max_norm_dev = std::max(max_norm_dev, std::abs(u * u + v * v + w * w - 1.0));
    }
    CHECK(max_err <= 1e-3);
    CHECK(max_norm_dev <= 1e-12);
}

TEST_CASE("Bloch with decay follows the closed-form relaxation") {
    // No drive: u+iv spirals down at g2, w decays to -1 at g1.
    const double g1 = 1.0 / 230.0, g2 = 1.0 / 115.0, h = M_PI / 400.0;
    const double u0 = 0.3, v0 = 0.4, w0 = 0.5;
    double u = u0, v = v0, w = w0;
    const int n_steps = 2000;
    for (int n = 0; n < n_steps; ++n) bloch_rk4_step(u, v, w, 0.0, g1, g2, h);

    const double T = double(n_steps) * h;
    const double r = std::hypot(u0, v0) * std::exp(-g2 * T);
    const double w_exact = -1.0 + (w0 + 1.0) * std::exp(-g1 * T);
    CHECK(std::hypot(u, v) == doctest::Approx(r).epsilon(1e-10));
    CHECK(w == doctest::Approx(w_exact).epsilon(1e-10));
}

TEST_CASE("vacuum advection: peak moves at c and keeps its amplitude") {
    const Grid g = build_grid(1.0 / 400.0, 0.5, 0.0, 30.0);
    const PulseSpec p = short_pulse(10.0);
    MediumSpec vac;
    SimState state = make_initial_state(g, p, vac);
    const MediumProfile prof = build_medium_profile(g, vac);
    Stepper stepper(g, prof, p, RelaxationSpec{}, StepperConfig{});

    const long n_steps = 4000; // advance by 5 wavelengths
    for (long n = 0; n < n_steps; ++n) stepper.step(state);

    const double shift = double(n_steps) * g.dT / kTwoPi;
    // L-inf against the exact advected profile
    double linf = 0.0;
    for (long i = 0; i < g.n_cells; ++i) {
        const double exact = p.waveform_xi(g.node_xi(i) - shift);
        linf = std::max(linf, std::abs(state.E[size_t(i)] - exact));
    }
    CHECK(linf < 1e-2);

    // peak amplitude and location
    double peak = 0.0;
    long ipk = 0;
    for (long i = 0; i < g.n_cells; ++i) {
        if (std::abs(state.E[size_t(i)]) > peak) {
            peak = std::abs(state.E[size_t(i)]);
            ipk = i;
        }
    }
    CHECK(peak == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(std::abs(g.node_xi(ipk) - (10.0 + shift)) < 0.5); // carrier-sample quantization
}

TEST_CASE("E = 0 with ground-state atoms is a fixed point") {
    const Grid g = build_grid(1.0 / 100.0, 0.5, -2.0, 6.0);
    MediumSpec med;
    med.d = 0.2;
    med.delta = 0.25;
    med.length = 2.0;
    const MediumProfile prof = build_medium_profile(g, med);
    PulseSpec p = short_pulse(-1.0);

    SimState state;
    state.E.assign(size_t(g.n_cells), 0.0);
    state.H.assign(size_t(g.n_cells - 1), 0.0);
    init_bloch(g, state.u, state.v, state.w);

    RelaxationSpec relax;
    relax.T1_fs = 1000.0;
    relax.T2_fs = 500.0;
    Stepper stepper(g, prof, p, relax, StepperConfig{});
    for (int n = 0; n < 50; ++n) stepper.step(state);

    for (long i = 0; i < g.n_cells; ++i) {
        CHECK(state.E[size_t(i)] == 0.0);
        CHECK(state.u[size_t(i)] == 0.0);
        CHECK(state.v[size_t(i)] == 0.0);
        CHECK(state.w[size_t(i)] == -1.0);
    }
}

TEST_CASE("mur1 absorbs an exiting pulse to below 1e-3 of its energy") {
    const Grid g = build_grid(1.0 / 400.0, 0.5, 0.0, 30.0);
    const PulseSpec p = short_pulse(15.0);
    MediumSpec vac;
    SimState state = make_initial_state(g, p, vac);
    const MediumProfile prof = build_medium_profile(g, vac);
    Stepper stepper(g, prof, p, RelaxationSpec{}, StepperConfig{});

    const double initial = stepper.em_energy(state);
    const long n_steps = long(kTwoPi * 25.0 / g.dT); // travel 25 wavelengths
    for (long n = 0; n < n_steps; ++n) stepper.step(state);
    CHECK(stepper.em_energy(state) < 1e-3 * initial);
}

TEST_CASE("pec reflects with peak within 1e-2 of the incident") {
    const Grid g = build_grid(1.0 / 400.0, 0.5, 0.0, 30.0);
    const PulseSpec p = short_pulse(15.0);
    MediumSpec vac;
    SimState state = make_initial_state(g, p, vac);
    const MediumProfile prof = build_medium_profile(g, vac);
    StepperConfig cfg;
    cfg.boundary = BoundaryKind::Pec;
    Stepper stepper(g, prof, p, RelaxationSpec{}, cfg);

    // to the wall (15 wavelengths) and back 10
    const long n_steps = long(kTwoPi * 25.0 / g.dT);
    for (long n = 0; n < n_steps; ++n) stepper.step(state);

    double peak = 0.0;
    for (double e : state.E) peak = std::max(peak, std::abs(e));
    CHECK(peak == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("boundary application on a zero field is a no-op") {
    const Grid g = build_grid(1.0 / 100.0, 0.5, 0.0, 10.0);
    std::vector<double> e_new(size_t(g.n_cells), 0.0), e_old(size_t(g.n_cells), 0.0);
    apply_boundary(e_new, e_old, g, BoundaryKind::Mur1);
    for (double x : e_new) CHECK(x == 0.0);
    apply_boundary(e_new, e_old, g, BoundaryKind::Pec);
    for (double x : e_new) CHECK(x == 0.0);
}

TEST_CASE("medium reaching the boundary is a configuration error") {
    const Grid g = build_grid(1.0 / 100.0, 0.5, 0.0, 2.0);
    MediumSpec med;
    med.d = 0.2;
    med.delta = 0.5;
    med.length = 2.0; // covers the whole grid
    const MediumProfile prof = build_medium_profile(g, med);
    const PulseSpec p = short_pulse(0.5);
    CHECK_THROWS_AS(Stepper(g, prof, p, RelaxationSpec{}, StepperConfig{}), ConfigError);
}

TEST_CASE("Bloch norm drift below 1e-8 per step with lifetimes disabled") {
    const Grid g = build_grid(1.0 / 400.0, 0.5, -10.0, 6.0);
    MediumSpec med;
    med.d = 0.2;
    med.delta = 0.25;
    med.length = 4.0;
    const MediumProfile prof = build_medium_profile(g, med);
    PulseSpec p = short_pulse(0.0);
    p.xi0 = default_xi0(g, p, 0.0);
    SimState state = make_initial_state(g, p, med);
    Stepper stepper(g, prof, p, RelaxationSpec{}, StepperConfig{});

    // march the pulse into the structure
    const long warmup = long(kTwoPi * (-p.xi0 + 1.0) / g.dT);
    for (long n = 0; n < warmup; ++n) stepper.step(state);
    const double dev0 = max_bloch_norm_dev(state, prof);

    const long n_steps = 2000;
    for (long n = 0; n < n_steps; ++n) stepper.step(state);
    const double dev1 = max_bloch_norm_dev(state, prof);
    CHECK((dev1 - dev0) / double(n_steps) < 1e-8);
}

TEST_CASE("vacuum energy with pec closure is conserved to 1e-6 over 1e4 steps") {
    const Grid g = build_grid(1.0 / 400.0, 0.5, 0.0, 10.0);
    const PulseSpec p = short_pulse(5.0);
    MediumSpec vac;
    SimState state = make_initial_state(g, p, vac);
    const MediumProfile prof = build_medium_profile(g, vac);
    StepperConfig cfg;
    cfg.boundary = BoundaryKind::Pec;
    Stepper stepper(g, prof, p, RelaxationSpec{}, cfg);
    stepper.set_energy_trace(true);

    double first = 0.0, lo = 0.0, hi = 0.0;
    for (long n = 0; n < 10000; ++n) {
        stepper.step(state);
        const double e = stepper.last_centered_energy();
        if (n == 0) {
            first = lo = hi = e;
        } else {
            lo = std::min(lo, e);
            hi = std::max(hi, e);
        }
    }
    CHECK((hi - lo) / first < 1e-6);
}

TEST_CASE("vacuum advection converges at second order between dxi=1/400 and 1/800") {
    auto l2_error = [](double dxi) {
        const Grid g = build_grid(dxi, 0.5, 0.0, 20.0);
        PulseSpec p;
        p.omega0 = 2.3;
        p.rabi0 = 1.4;
        p.tau_p_fs = 2.0;
        p.xi0 = 8.0;
        MediumSpec vac;
        SimState state = make_initial_state(g, p, vac);
        const MediumProfile prof = build_medium_profile(g, vac);
        Stepper stepper(g, prof, p, RelaxationSpec{}, StepperConfig{});
        const long n_steps = long(std::lround(kTwoPi * 2.0 / g.dT)); // advance 2 wavelengths
        for (long n = 0; n < n_steps; ++n) stepper.step(state);
        const double shift = double(n_steps) * g.dT / kTwoPi;
        double acc = 0.0;
        for (long i = 0; i < g.n_cells; ++i) {
            const double d = state.E[size_t(i)] - p.waveform_xi(g.node_xi(i) - shift);
            acc += d * d;
        }
        return std::sqrt(acc * g.dxi);
    };
    const double e400 = l2_error(1.0 / 400.0);
    const double e800 = l2_error(1.0 / 800.0);
    const double ratio = e400 / e800;
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
}

TEST_CASE("divergence detection reports the step index") {
    const Grid g = build_grid(1.0 / 100.0, 0.5, 0.0, 10.0);
    const PulseSpec p = short_pulse(5.0);
    MediumSpec vac;
    SimState state = make_initial_state(g, p, vac);
    state.E[100] = std::numeric_limits<double>::quiet_NaN();
    const MediumProfile prof = build_medium_profile(g, vac);
    Stepper stepper(g, prof, p, RelaxationSpec{}, StepperConfig{});
    CHECK_THROWS_AS(
        [&] {
            for (int n = 0; n < 200; ++n) stepper.step(state);
        }(),
        DivergedError);
}
