#pragma once

// Brute-force shooting reference for the 1D channel profiles: Heun (second
// order) integration of the channel ODEs over fine grids plus superposition
// of homogeneous and forced solutions. Independent of the closed-form path in
// the library.

#include <cmath>
#include <vector>

#include "fpflow/core.hpp"

namespace channel_reference {

struct Trajectory {
    std::vector<double> u, w;  // value and derivative at every grid point
};

/// Integrates u'' = lin * u + rhs from y0 over n steps of size dh with Heun's
/// method, starting from (u0, w0).
inline Trajectory integrate(double u0, double w0, double lin, double rhs, double dh,
                            int n) {
    Trajectory t;
    t.u.resize(n + 1);
    t.w.resize(n + 1);
    double u = u0, w = w0;
    t.u[0] = u;
    t.w[0] = w;
    for (int i = 0; i < n; ++i) {
        const double ku1 = w;
        const double kw1 = lin * u + rhs;
        const double ku2 = w + dh * kw1;
        const double kw2 = lin * (u + dh * ku1) + rhs;
        u += 0.5 * dh * (ku1 + ku2);
        w += 0.5 * dh * (kw1 + kw2);
        t.u[i + 1] = u;
        t.w[i + 1] = w;
    }
    return t;
}

struct Profile {
    std::vector<double> y, u;
    double u_B = 0.0;    // free-side velocity at y = 0
    double dudy0 = 0.0;  // derivative at y = 0+
};

/// Free region only: mu u'' = G on (0, h), u(h) = 0, and the slip relation
/// u(0) - Q = (sqrt(k)/alpha) u'(0+) with Q = -k G / mu. Integration runs from
/// the wall down to the interface; the slip condition fixes the superposition.
inline Profile darcy_channel(double h, double k, double alpha, double mu, double G,
                             int n) {
    const double dh = -h / n;  // downwards from y = h
    const Trajectory hom = integrate(0.0, 1.0, 0.0, 0.0, dh, n);
    const Trajectory part = integrate(0.0, 0.0, 0.0, G / mu, dh, n);

    const double Q = -k * G / mu;
    const double sk = std::sqrt(k) / alpha;
    // (a hom_u + part_u) - Q = sk (a hom_w + part_w) at y = 0 (index n).
    const double a =
        (Q - part.u[n] + sk * part.w[n]) / (hom.u[n] - sk * hom.w[n]);

    Profile p;
    p.y.resize(n + 1);
    p.u.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        p.y[i] = h + i * dh;
        p.u[i] = a * hom.u[i] + part.u[i];
    }
    p.u_B = p.u[n];
    p.dudy0 = a * hom.w[n] + part.w[n];
    return p;
}

struct TwoRegionProfile {
    std::vector<double> y, u;  // porous part first (y in [-H, 0]), then free
    double u_B = 0.0;
    double u_por0 = 0.0;
    double dudy0 = 0.0;
};

/// Both regions: mu u'' = G (free), mu u'' - (mu/k) u = G (porous),
/// u(h) = u(-H) = 0 and the tangential interface conditions
///   mu u_f'(0+) =  2 a11 u_f(0) + 2 a12 u_p(0)
///   mu u_p'(0-) = -2 a12 u_f(0) - 2 a22 u_p(0).
inline TwoRegionProfile brinkman_channel(double h, double H, double k,
                                         const fpflow::InterfaceLaw& law, double mu,
                                         double G, int n) {
    const double dhf = -h / n;  // free: from the top wall down to 0
    const double dhp = H / n;   // porous: from the bottom wall up to 0
    const Trajectory fh = integrate(0.0, 1.0, 0.0, 0.0, dhf, n);
    const Trajectory fp = integrate(0.0, 0.0, 0.0, G / mu, dhf, n);
    const Trajectory ph = integrate(0.0, 1.0, 1.0 / k, 0.0, dhp, n);
    const Trajectory pp = integrate(0.0, 0.0, 1.0 / k, G / mu, dhp, n);

    // Unknown superposition weights (a, b); both conditions at y = 0.
    const double A11 = mu * fh.w[n] - 2.0 * law.a11 * fh.u[n];
    const double A12 = -2.0 * law.a12 * ph.u[n];
    const double r1 = -(mu * fp.w[n] - 2.0 * law.a11 * fp.u[n] - 2.0 * law.a12 * pp.u[n]);
    const double A21 = 2.0 * law.a12 * fh.u[n];
    const double A22 = mu * ph.w[n] + 2.0 * law.a22 * ph.u[n];
    const double r2 = -(mu * pp.w[n] + 2.0 * law.a12 * fp.u[n] + 2.0 * law.a22 * pp.u[n]);
    const double det = A11 * A22 - A12 * A21;
    const double a = (r1 * A22 - A12 * r2) / det;
    const double b = (A11 * r2 - r1 * A21) / det;

    TwoRegionProfile p;
    p.y.resize(2 * n + 2);
    p.u.resize(2 * n + 2);
    for (int j = 0; j <= n; ++j) {  // porous: stored bottom-up
        p.y[j] = -H + j * dhp;
        p.u[j] = b * ph.u[j] + pp.u[j];
    }
    for (int i = 0; i <= n; ++i) {  // free: integration ran top-down
        p.y[n + 1 + i] = 0.0 - i * dhf;  // = i * h / n
        p.u[n + 1 + i] = a * fh.u[n - i] + fp.u[n - i];
    }
    p.u_B = a * fh.u[n] + fp.u[n];
    p.u_por0 = b * ph.u[n] + pp.u[n];
    p.dudy0 = a * fh.w[n] + fp.w[n];
    return p;
}

}  // namespace channel_reference
