// gapsol: per-cell two-level Bloch dynamics in dimensionless time,
//   du/dT = -g2*u - v
//   dv/dT = -g2*v + u + a*w        with a = (2*Omega0/omega0)*E
//   dw/dT = -g1*(w+1) - a*v
// g1 = 1/(T1*omega0), g2 = 1/(T2*omega0); zero rates encode infinite lifetimes.
#pragma once

#include <cmath>
#include <limits>

#include "gapsol/errors.hpp"

namespace gapsol {

struct RelaxationSpec {
    double T1_fs = std::numeric_limits<double>::infinity();
    double T2_fs = std::numeric_limits<double>::infinity();
};

struct BlochRates {
    double g1 = 0.0;   // 1/(T1 * omega0)
    double g2 = 0.0;   // 1/(T2 * omega0)
    double kappa = 0.0; // 2*Omega0/omega0

    static BlochRates make(const RelaxationSpec& relax, double omega0, double rabi0) {
        if (!(relax.T1_fs > 0.0) || !(relax.T2_fs > 0.0))
            throw ConfigError("relaxation: T1_fs and T2_fs must be positive (inf allowed)");
        BlochRates r;
        r.g1 = std::isinf(relax.T1_fs) ? 0.0 : 1.0 / (relax.T1_fs * omega0);
        r.g2 = std::isinf(relax.T2_fs) ? 0.0 : 1.0 / (relax.T2_fs * omega0);
        r.kappa = 2.0 * rabi0 / omega0;
        return r;
    }
};

// Classical fourth-order one-step update with the drive a held constant.
inline void bloch_rk4_step(double& u, double& v, double& w, double a,
                           double g1, double g2, double h) {
    const double u0 = u, v0 = v, w0 = w;

    auto fu = [g2](double uu, double vv) { return -g2 * uu - vv; };
    auto fv = [g2, a](double uu, double vv, double ww) { return -g2 * vv + uu + a * ww; };
    auto fw = [g1, a](double vv, double ww) { return -g1 * (ww + 1.0) - a * vv; };

    const double k1u = fu(u0, v0), k1v = fv(u0, v0, w0), k1w = fw(v0, w0);
    const double u1 = u0 + 0.5 * h * k1u, v1 = v0 + 0.5 * h * k1v, w1 = w0 + 0.5 * h * k1w;
    const double k2u = fu(u1, v1), k2v = fv(u1, v1, w1), k2w = fw(v1, w1);
    const double u2 = u0 + 0.5 * h * k2u, v2 = v0 + 0.5 * h * k2v, w2 = w0 + 0.5 * h * k2w;
    const double k3u = fu(u2, v2), k3v = fv(u2, v2, w2), k3w = fw(v2, w2);
    const double u3 = u0 + h * k3u, v3 = v0 + h * k3v, w3 = w0 + h * k3w;
    const double k4u = fu(u3, v3), k4v = fv(u3, v3, w3), k4w = fw(v3, w3);

    u = u0 + (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    v = v0 + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    w = w0 + (h / 6.0) * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
}

// Crank-Nicolson update: (I - h/2 M) x' = (I + h/2 M) x + h*b with the drive
// frozen. Unconditionally stable; exactly norm-preserving when g1 = g2 = 0.
inline void bloch_cn_step(double& u, double& v, double& w, double a,
                          double g1, double g2, double h) {
    const double p = 0.5 * h;
    // A = I - p*M with M = [[-g2,-1,0],[1,-g2,a],[0,-a,-g1]]
    const double a11 = 1.0 + p * g2, a12 = p, a13 = 0.0;
    const double a21 = -p, a22 = 1.0 + p * g2, a23 = -p * a;
    const double a31 = 0.0, a32 = p * a, a33 = 1.0 + p * g1;
    // r = (I + p*M) x + h*b
    const double r1 = (1.0 - p * g2) * u - p * v;
    const double r2 = p * u + (1.0 - p * g2) * v + p * a * w;
    const double r3 = -p * a * v + (1.0 - p * g1) * w - h * g1;

    const double c11 = a22 * a33 - a23 * a32;
    const double c12 = a13 * a32 - a12 * a33;
    const double c13 = a12 * a23 - a13 * a22;
    const double c21 = a23 * a31 - a21 * a33;
    const double c22 = a11 * a33 - a13 * a31;
    const double c23 = a13 * a21 - a11 * a23;
    const double c31 = a21 * a32 - a22 * a31;
    const double c32 = a12 * a31 - a11 * a32;
    const double c33 = a11 * a22 - a12 * a21;
    const double inv_det = 1.0 / (a11 * c11 + a12 * c21 + a13 * c31);

    u = (c11 * r1 + c12 * r2 + c13 * r3) * inv_det;
    v = (c21 * r1 + c22 * r2 + c23 * r3) * inv_det;
    w = (c31 * r1 + c32 * r2 + c33 * r3) * inv_det;
}

} // namespace gapsol
