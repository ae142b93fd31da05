#include "gapsol/stepper.hpp"

#include <cmath>
#include <sstream>

namespace gapsol {

namespace {

// Straight-line RK4 with the drive frozen at the half-level field; cells are
// independent, so the loop vectorizes.
void bloch_rk4_block(const double* __restrict e_old, double* __restrict e_new,
                     double* __restrict up, double* __restrict vp, double* __restrict wp,
                     const double* __restrict src, long blk_begin, long blk_end,
                     double kappa, double g1, double g2, double h) {
    for (long i = blk_begin; i < blk_end; ++i) {
        const double a = kappa * 0.5 * (e_old[i] + e_new[i]);
        const double u0 = up[i], v0 = vp[i], w0 = wp[i];

        const double k1u = -g2 * u0 - v0;
        const double k1v = -g2 * v0 + u0 + a * w0;
        const double k1w = -g1 * (w0 + 1.0) - a * v0;

        const double u1 = u0 + 0.5 * h * k1u;
        const double v1 = v0 + 0.5 * h * k1v;
        const double w1 = w0 + 0.5 * h * k1w;
        const double k2u = -g2 * u1 - v1;
        const double k2v = -g2 * v1 + u1 + a * w1;
        const double k2w = -g1 * (w1 + 1.0) - a * v1;

        const double u2 = u0 + 0.5 * h * k2u;
        const double v2 = v0 + 0.5 * h * k2v;
        const double w2 = w0 + 0.5 * h * k2w;
        const double k3u = -g2 * u2 - v2;
        const double k3v = -g2 * v2 + u2 + a * w2;
        const double k3w = -g1 * (w2 + 1.0) - a * v2;

        const double u3 = u0 + h * k3u;
        const double v3 = v0 + h * k3v;
        const double w3 = w0 + h * k3w;
        const double k4u = -g2 * u3 - v3;
        const double k4v = -g2 * v3 + u3 + a * w3;
        const double k4w = -g1 * (w3 + 1.0) - a * v3;

        const double du = (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        up[i] = u0 + du;
        vp[i] = v0 + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        wp[i] = w0 + (h / 6.0) * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        e_new[i] -= src[i] * du;
    }
}

} // namespace

BlochScheme parse_scheme(const std::string& name) {
    if (name == "bloch-rk4") return BlochScheme::Rk4;
    if (name == "bloch-cn") return BlochScheme::Cn;
    throw ConfigError("stepper: unknown scheme '" + name + "' (expected bloch-rk4 or bloch-cn)");
}

BoundaryKind parse_boundary(const std::string& name) {
    if (name == "mur1") return BoundaryKind::Mur1;
    if (name == "pec") return BoundaryKind::Pec;
    throw ConfigError("stepper: unknown boundary '" + name + "' (expected mur1 or pec)");
}

std::string scheme_name(BlochScheme s) {
    return s == BlochScheme::Rk4 ? "bloch-rk4" : "bloch-cn";
}

std::string boundary_name(BoundaryKind b) {
    return b == BoundaryKind::Mur1 ? "mur1" : "pec";
}

void apply_boundary(std::vector<double>& e_new, const std::vector<double>& e_old,
                    const Grid& grid, BoundaryKind kind) {
    const size_t n = e_new.size();
    if (kind == BoundaryKind::Pec) {
        e_new[0] = 0.0;
        e_new[n - 1] = 0.0;
        return;
    }
    // First-order Mur: outgoing characteristics leave, coefficient (S-1)/(S+1).
    const double S = grid.courant;
    const double m = (S - 1.0) / (S + 1.0);
    e_new[0] = e_old[1] + m * (e_new[1] - e_old[0]);
    e_new[n - 1] = e_old[n - 2] + m * (e_new[n - 2] - e_old[n - 1]);
}

Stepper::Stepper(const Grid& grid, const MediumProfile& profile, const PulseSpec& pulse,
                 const RelaxationSpec& relax, const StepperConfig& cfg)
    : grid_(grid), profile_(profile), cfg_(cfg),
      rates_(BlochRates::make(relax, pulse.omega0, pulse.rabi0)) {
    courant_check(grid_);
    courant_ = grid_.courant;
    mur_coef_ = (courant_ - 1.0) / (courant_ + 1.0);

    if (long(profile_.omega_c.size()) != grid_.n_cells)
        throw ConfigError("stepper: medium profile does not match the grid");
    if (profile_.omega_c.front() != 0.0 || profile_.omega_c.back() != 0.0 ||
        profile_.omega_c[1] != 0.0 || profile_.omega_c[size_t(grid_.n_cells) - 2] != 0.0)
        throw ConfigError("stepper: medium extends to the grid boundary; pad with free space");

    source_ratio_.assign(profile_.omega_c.size(), 0.0);
    for (size_t i = 0; i < source_ratio_.size(); ++i)
        source_ratio_[i] = profile_.omega_c[i] / pulse.rabi0;

    e_scratch_.assign(size_t(grid_.n_cells), 0.0);
}

void Stepper::step(SimState& state) {
    const long n = grid_.n_cells;
    const double S = courant_;
    const double h = grid_.dT;
    const double g1 = rates_.g1, g2 = rates_.g2, kappa = rates_.kappa;

    const std::vector<double>& E = state.E;
    std::vector<double>& H = state.H;
    std::vector<double>& en = e_scratch_;

    // 1. curl-only predictor at interior nodes
    for (long i = 1; i < n - 1; ++i)
        en[size_t(i)] = E[size_t(i)] - S * (H[size_t(i)] - H[size_t(i) - 1]);

    // 2. Bloch update on medium cells; polarization source folded into E
    if (cfg_.scheme == BlochScheme::Rk4) {
        for (const auto& blk : profile_.blocks)
            bloch_rk4_block(E.data(), en.data(), state.u.data(), state.v.data(),
                            state.w.data(), source_ratio_.data(), blk.first, blk.second,
                            kappa, g1, g2, h);
    } else {
        for (const auto& [begin, end] : profile_.blocks) {
            for (long i = begin; i < end; ++i) {
                const size_t k = size_t(i);
                const double a = kappa * 0.5 * (E[k] + en[k]);
                double uu = state.u[k], vv = state.v[k], ww = state.w[k];
                const double u_before = uu;
                bloch_cn_step(uu, vv, ww, a, g1, g2, h);
                state.u[k] = uu;
                state.v[k] = vv;
                state.w[k] = ww;
                en[k] -= source_ratio_[k] * (uu - u_before);
            }
        }
    }

    // 3. closure at the end nodes
    apply_boundary(en, E, grid_, cfg_.boundary);

    // 4. commit E, advance H a full step between half levels
    std::swap(state.E, e_scratch_);

    if (trace_energy_) {
        h_old_ = H;
    }

    const std::vector<double>& En = state.E;
    for (long i = 0; i < n - 1; ++i)
        H[size_t(i)] -= S * (En[size_t(i) + 1] - En[size_t(i)]);

    if (trace_energy_) {
        double acc = 0.0;
        for (long i = 0; i < n; ++i)
            acc += En[size_t(i)] * En[size_t(i)];
        for (long i = 0; i < n - 1; ++i)
            acc += h_old_[size_t(i)] * H[size_t(i)];
        last_energy_ = acc * grid_.dxi;
    }

    ++state.t_index;

    if (cfg_.divergence_check_stride > 0 &&
        state.t_index % cfg_.divergence_check_stride == 0)
        check_finite(state);
}

void Stepper::check_finite(const SimState& state) const {
    for (double x : state.E) {
        if (!std::isfinite(x)) {
            std::ostringstream msg;
            msg << "run diverged: non-finite field at step " << state.t_index;
            throw DivergedError(msg.str(), state.t_index);
        }
    }
}

double Stepper::em_energy_in(const SimState& state, double a, double b) const {
    double acc = 0.0;
    for (long i = 0; i < grid_.n_cells; ++i) {
        const double xi = grid_.node_xi(i);
        if (xi >= a && xi < b)
            acc += state.E[size_t(i)] * state.E[size_t(i)];
    }
    for (long i = 0; i + 1 < grid_.n_cells; ++i) {
        const double xi = grid_.half_node_xi(i);
        if (xi >= a && xi < b)
            acc += state.H[size_t(i)] * state.H[size_t(i)];
    }
    return acc * grid_.dxi;
}

double Stepper::em_energy(const SimState& state) const {
    double acc = 0.0;
    for (double x : state.E) acc += x * x;
    for (double x : state.H) acc += x * x;
    return acc * grid_.dxi;
}

} // namespace gapsol
