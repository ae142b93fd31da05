#include "gapsol/fit.hpp"

#include <algorithm>
#include <cmath>

#include "gapsol/envelope.hpp"
#include "gapsol/fft.hpp"

namespace gapsol {

namespace {

std::vector<double> numeric_jacobian_column(const ResidualFn& f, std::vector<double> p,
                                            std::size_t j, std::size_t m) {
    const double h = 1e-7 * std::max(1.0, std::abs(p[j]));
    std::vector<double> rp(m), rm(m);
    const double saved = p[j];
    p[j] = saved + h;
    f(p, rp);
    p[j] = saved - h;
    f(p, rm);
    std::vector<double> col(m);
    const double inv = 1.0 / (2.0 * h);
    for (std::size_t i = 0; i < m; ++i) col[i] = (rp[i] - rm[i]) * inv;
    return col;
}

// Gaussian elimination with partial pivoting; n is tiny (<= 5).
std::vector<double> solve_dense(std::vector<std::vector<double>> A, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        std::swap(A[c], A[piv]);
        std::swap(b[c], b[piv]);
        const double d = A[c][c];
        if (d == 0.0) return std::vector<double>(n, 0.0);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = A[r][c] / d;
            if (f == 0.0) continue;
            for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t ci = n; ci-- > 0;) {
        double s = b[ci];
        for (std::size_t k = ci + 1; k < n; ++k) s -= A[ci][k] * x[k];
        x[ci] = s / A[ci][ci];
    }
    return x;
}

double cost_of(const std::vector<double>& r) {
    double c = 0.0;
    for (double x : r) c += x * x;
    return c;
}

} // namespace

LmResult lm_fit(const ResidualFn& residuals, std::size_t n_residuals,
                std::vector<double> initial, const LmOptions& opts) {
    const std::size_t n = initial.size();
    const std::size_t m = n_residuals;

    auto clamp_params = [&](std::vector<double>& p) {
        if (!opts.lower.empty())
            for (std::size_t j = 0; j < n; ++j) p[j] = std::max(p[j], opts.lower[j]);
        if (!opts.upper.empty())
            for (std::size_t j = 0; j < n; ++j) p[j] = std::min(p[j], opts.upper[j]);
    };

    LmResult res;
    res.params = std::move(initial);
    clamp_params(res.params);

    std::vector<double> r(m);
    residuals(res.params, r);
    res.cost = cost_of(r);

    double lambda = 1e-3;
    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        res.iterations = iter;

        std::vector<std::vector<double>> J(n);
        for (std::size_t j = 0; j < n; ++j) {
            if (!opts.frozen.empty() && opts.frozen[j])
                J[j].assign(m, 0.0);
            else
                J[j] = numeric_jacobian_column(residuals, res.params, j, m);
        }

        std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
        std::vector<double> g(n, 0.0);
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a; b < n; ++b) {
                double s = 0.0;
                for (std::size_t i = 0; i < m; ++i) s += J[a][i] * J[b][i];
                A[a][b] = A[b][a] = s;
            }
            double s = 0.0;
            for (std::size_t i = 0; i < m; ++i) s += J[a][i] * r[i];
            g[a] = s;
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (!opts.frozen.empty() && opts.frozen[j]) {
                for (std::size_t k = 0; k < n; ++k) A[j][k] = A[k][j] = 0.0;
                A[j][j] = 1.0;
                g[j] = 0.0;
            }
        }

        double gmax = 0.0;
        for (double x : g) gmax = std::max(gmax, std::abs(x));
        if (gmax < 1e-14 * (1.0 + res.cost)) {
            res.ok = true;
            return res;
        }

        bool accepted = false;
        for (int tries = 0; tries < 12 && !accepted; ++tries) {
            auto Ad = A;
            for (std::size_t j = 0; j < n; ++j)
                Ad[j][j] += lambda * std::max(A[j][j], 1e-12);
            std::vector<double> negg(n);
            for (std::size_t j = 0; j < n; ++j) negg[j] = -g[j];
            std::vector<double> delta = solve_dense(Ad, negg);

            std::vector<double> cand = res.params;
            for (std::size_t j = 0; j < n; ++j) cand[j] += delta[j];
            clamp_params(cand);

            std::vector<double> rc(m);
            residuals(cand, rc);
            const double cost_c = cost_of(rc);
            if (cost_c < res.cost) {
                const double drop = res.cost - cost_c;
                double step = 0.0;
                for (std::size_t j = 0; j < n; ++j)
                    step = std::max(step, std::abs(cand[j] - res.params[j]) /
                                              (std::abs(res.params[j]) + 1.0));
                res.params = std::move(cand);
                r = std::move(rc);
                res.cost = cost_c;
                lambda = std::max(lambda / 3.0, 1e-14);
                accepted = true;
                if (drop <= opts.ftol * std::max(res.cost, 1e-300) || step < opts.xtol) {
                    res.ok = true;
                    return res;
                }
            } else {
                lambda *= 4.0;
            }
        }
        if (!accepted) {
            // No step improves the cost: either converged on a flat region or stuck.
            res.ok = gmax < 1e-6 * (1.0 + res.cost) || res.cost < 1e-20;
            return res;
        }
    }
    res.ok = false;
    return res;
}

namespace {

struct SeriesWindow {
    std::vector<double> coords;
    std::vector<double> field;
};

SeriesWindow window_around(const std::vector<double>& coords, const std::vector<double>& field,
                           double center, double half_width) {
    SeriesWindow w;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (coords[i] >= center - half_width && coords[i] <= center + half_width) {
            w.coords.push_back(coords[i]);
            w.field.push_back(field[i]);
        }
    }
    return w;
}

double wrap_phase(double phi) {
    phi = std::fmod(phi, kTwoPi);
    if (phi < 0.0) phi += kTwoPi;
    return phi;
}

} // namespace

SolitonFit fit_soliton_series(const std::vector<double>& coords,
                              const std::vector<double>& field, EnvelopeAxis axis,
                              double omega0, double rabi0,
                              std::optional<double> vg_seed_opt) {
    Envelope env = envelope_of(field, coords, axis);
    const PeakInfo pk = envelope_peak(env);
    const double fwhm = intensity_fwhm(env);

    const double vg_seed = std::clamp(vg_seed_opt.value_or(0.9), 0.05, 1.0);
    // Intensity FWHM of sech^2 is 1.76 widths; on the space axis the sech
    // width is vg*tau/(2*pi).
    double tau_seed;
    if (axis == EnvelopeAxis::TimeAtFixedXi)
        tau_seed = fwhm / 1.76;
    else
        tau_seed = kTwoPi * fwhm / (1.76 * vg_seed);
    tau_seed = std::max(tau_seed, 1e-3);

    // Carrier phase seed from the analytic signal at the envelope peak.
    auto z = analytic_signal(field);
    std::size_t ipk = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (std::abs(coords[i] - pk.position) <= std::abs(coords[ipk] - pk.position))
            ipk = i;
        best = std::max(best, std::abs(z[i]));
    }
    double phi_seed;
    if (axis == EnvelopeAxis::SpaceAtFixedT)
        phi_seed = std::arg(z[ipk]); // model carrier exp(+i(2*pi*(xi-c)+phi))
    else
        phi_seed = -std::arg(z[ipk]); // model carrier exp(+i((T-c)-phi))

    const double width_factor = axis == EnvelopeAxis::TimeAtFixedXi ? 1.0 : vg_seed / kTwoPi;
    SeriesWindow win = window_around(coords, field, pk.position, 4.0 * tau_seed * width_factor);
    if (win.coords.size() < 16)
        throw AnalysisError("fit_soliton: too few samples around the pulse");

    auto model_residuals = [&](const std::vector<double>& p, std::vector<double>& r) {
        SolitonParams sp;
        sp.vg = p[0];
        sp.tau = p[1];
        sp.center = p[2];
        sp.phi = p[3];
        sp.scale = p[4];
        for (std::size_t i = 0; i < win.coords.size(); ++i)
            r[i] = analytic_soliton_value(sp, omega0, rabi0, axis, win.coords[i]) - win.field[i];
    };

    LmOptions opts;
    opts.lower = {0.02, 1e-3, -1e9, -1e9, 1e-6};
    opts.upper = {1.0, 1e6, 1e9, 1e9, 1e6};

    // Stage 1: amplitude pinned to the analytic 2*pi-soliton value (scale = 1)
    // keeps (vg, tau) identifiable from width plus amplitude.
    std::vector<double> p = {vg_seed, tau_seed, pk.position, phi_seed, 1.0};
    opts.frozen = {false, false, false, false, true};
    LmResult stage1 = lm_fit(model_residuals, win.coords.size(), p, opts);

    // Stage 2: everything free.
    opts.frozen.clear();
    LmResult stage2 = lm_fit(model_residuals, win.coords.size(), stage1.params, opts);

    SolitonFit fit;
    fit.axis = axis;
    fit.vg = stage2.params[0];
    fit.tau = stage2.params[1];
    fit.center = stage2.params[2];
    fit.phi = wrap_phase(stage2.params[3]);
    fit.amplitude_scale = stage2.params[4];
    fit.iterations = stage1.iterations + stage2.iterations;
    fit.converged = stage2.ok;

    // Residual over the fitted center +- 4*tau window.
    const double wf = axis == EnvelopeAxis::TimeAtFixedXi ? 1.0 : fit.vg / kTwoPi;
    SeriesWindow res_win = window_around(coords, field, fit.center, 4.0 * fit.tau * wf);
    if (!res_win.coords.empty()) {
        SolitonParams sp{fit.vg, fit.tau, fit.center, fit.phi, fit.amplitude_scale};
        double acc = 0.0;
        for (std::size_t i = 0; i < res_win.coords.size(); ++i) {
            const double d =
                analytic_soliton_value(sp, omega0, rabi0, axis, res_win.coords[i]) -
                res_win.field[i];
            acc += d * d;
        }
        fit.rms_residual = std::sqrt(acc / double(res_win.coords.size()));
    }

    if (!stage2.ok)
        throw FitError("fit_soliton: no convergence within the iteration cap", fit);
    return fit;
}

SolitonFit fit_soliton(const RunRecord& rec, const FitRequest& req) {
    if (req.axis == EnvelopeAxis::SpaceAtFixedT) {
        const Snapshot& snap = rec.snapshot_at(req.snapshot_ps);
        std::vector<double> coords, field;
        coords.reserve(snap.E.size());
        for (long i = 0; i < rec.grid.n_cells; ++i) {
            const double xi = rec.grid.node_xi(i);
            if (req.search_range && (xi < req.search_range->lo || xi > req.search_range->hi))
                continue;
            coords.push_back(xi);
            field.push_back(snap.E[size_t(i)]);
        }
        return fit_soliton_series(coords, field, req.axis, rec.pulse.omega0, rec.pulse.rabi0,
                                  req.vg_seed);
    }

    const ProbeSeries& probe = rec.probe_at(req.probe_xi);
    std::vector<double> coords, field;
    coords.reserve(probe.E.size());
    for (std::size_t k = 0; k < probe.E.size(); ++k) {
        const double T = double(k) * probe.sample_dT;
        if (req.search_range && (T < req.search_range->lo || T > req.search_range->hi))
            continue;
        coords.push_back(T);
        field.push_back(probe.E[k]);
    }
    return fit_soliton_series(coords, field, req.axis, rec.pulse.omega0, rec.pulse.rabi0,
                              req.vg_seed);
}

} // namespace gapsol
