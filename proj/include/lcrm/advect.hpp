#pragma once

#include <cmath>

#include "lcrm/field.hpp"

namespace lcrm {

namespace eno {

inline double minmod(double a, double b) {
    if (a * b <= 0.0) return 0.0;
    return std::abs(a) < std::abs(b) ? a : b;
}

/// Second-order ENO upwind derivative along one axis of a cell-centered field.
/// `fm2..fp2` are the five samples centered on the cell; `sign` is the advecting
/// velocity sign. Exact for linear profiles.
inline double upwind_deriv(double fm2, double fm1, double f0, double fp1, double fp2,
                           double h, double sign) {
    if (sign >= 0.0) {
        double d2a = fp1 - 2.0 * f0 + fm1;
        double d2b = f0 - 2.0 * fm1 + fm2;
        return (f0 - fm1) / h + minmod(d2a, d2b) / (2.0 * h);
    }
    double d2a = fp2 - 2.0 * fp1 + f0;
    double d2b = fp1 - 2.0 * f0 + fm1;
    return (fp1 - f0) / h - minmod(d2a, d2b) / (2.0 * h);
}

}  // namespace eno

/// Advances a cell-centered scalar by -u.grad(f) with second-order ENO upwinding;
/// constant fields are unchanged. Throws CflError if |u| dt / h > 1 anywhere.
inline ScalarField eno2_advect(const ScalarField& f, const MacVelocity& vel, double dt) {
    const GridSpec& g = f.grid;
    double umax = max_abs_velocity(vel);
    double hmin = g.min_h();
    if (umax * dt / hmin > 1.0 + 1e-12)
        throw CflError("eno2_advect: CFL violated (|u| dt / h = " +
                       std::to_string(umax * dt / hmin) + ")");

    ScalarField out(g);
    for_cells(g, [&](int i, int j, int k) {
        double uc = 0.5 * (vel.fu(i, j, k) + vel.fu(i + 1, j, k));
        double vc = 0.5 * (vel.fv(i, j, k) + vel.fv(i, j + 1, k));
        double wc = 0.5 * (vel.fw(i, j, k) + vel.fw(i, j, k + 1));
        double fx = eno::upwind_deriv(f(i - 2, j, k), f(i - 1, j, k), f(i, j, k),
                                      f(i + 1, j, k), f(i + 2, j, k), g.hx, uc);
        double fy = eno::upwind_deriv(f(i, j - 2, k), f(i, j - 1, k), f(i, j, k),
                                      f(i, j + 1, k), f(i, j + 2, k), g.hy, vc);
        double fz = eno::upwind_deriv(f(i, j, k - 2), f(i, j, k - 1), f(i, j, k),
                                      f(i, j, k + 1), f(i, j, k + 2), g.hz, wc);
        out(i, j, k) = f(i, j, k) - dt * (uc * fx + vc * fy + wc * fz);
    });
    apply_boundary(out);
    return out;
}

/// Cell-centered central divergence of a MAC velocity.
inline ScalarField divergence(const MacVelocity& vel) {
    const GridSpec& g = vel.grid;
    ScalarField out(g);
    for_cells(g, [&](int i, int j, int k) {
        out(i, j, k) = (vel.fu(i + 1, j, k) - vel.fu(i, j, k)) / g.hx +
                       (vel.fv(i, j + 1, k) - vel.fv(i, j, k)) / g.hy +
                       (vel.fw(i, j, k + 1) - vel.fw(i, j, k)) / g.hz;
    });
    return out;
}

inline double max_abs_interior(const ScalarField& f) {
    const GridSpec& g = f.grid;
    return ordered_max(0, g.nz, [&](int k) {
        double m = 0.0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) m = std::max(m, std::abs(f(i, j, k)));
        return m;
    });
}

inline double sum_interior(const ScalarField& f) {
    const GridSpec& g = f.grid;
    return ordered_sum(0, g.nz, [&](int k) {
        double s = 0.0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) s += f(i, j, k);
        return s;
    });
}

}  // namespace lcrm
