#pragma once

#include <cmath>

#include "lcrm/advect.hpp"
#include "lcrm/field.hpp"
#include "lcrm/poisson.hpp"

namespace lcrm {

struct FlowParams {
    double rho1 = 1.0, rho2 = 1.0;
    double mu1 = 0.0, mu2 = 0.0;
    Vec3 gravity{};
    Vec3 body_force1{};  // volumetric force in phase 1
    Vec3 body_force2{};  // volumetric force in phase 2

    void validate() const {
        if (rho1 <= 0.0 || rho2 <= 0.0 || mu1 <= 0.0 || mu2 <= 0.0)
            throw ConfigError("fluids: densities and viscosities must be positive");
    }
};

/// Stability envelope of the explicit scheme: half of the tightest of the
/// convective, viscous, capillary, and diffusive limits.
inline double timestep_limit(double u_max, double h, const FlowParams& fp,
                             double sigma_max, double d_s, double d_c2) {
    double rho_min = std::min(fp.rho1, fp.rho2);
    double rho_bar = 0.5 * (fp.rho1 + fp.rho2);
    double mu_max = std::max(fp.mu1, fp.mu2);
    double dt = std::numeric_limits<double>::max();
    if (u_max > 0.0) dt = std::min(dt, h / u_max);
    if (mu_max > 0.0) dt = std::min(dt, 0.25 * rho_min * h * h / mu_max);
    if (sigma_max > 0.0) dt = std::min(dt, std::sqrt(rho_bar * h * h * h / (4.0 * M_PI * sigma_max)));
    if (d_s > 0.0) dt = std::min(dt, 0.25 * h * h / d_s);
    if (d_c2 > 0.0) dt = std::min(dt, 0.25 * h * h / d_c2);
    return 0.5 * dt;
}

namespace detail {

inline double harmonic_face(double a, double b) { return 2.0 * a * b / (a + b); }

/// ENO2 convective derivative of one staggered component along one axis.
inline double conv_deriv(const Array3& f, int i, int j, int k, int axis, double h,
                         double sign) {
    int d[3] = {0, 0, 0};
    d[axis] = 1;
    auto at = [&](int m) { return f(i + m * d[0], j + m * d[1], k + m * d[2]); };
    return eno::upwind_deriv(at(-2), at(-1), at(0), at(1), at(2), h, sign);
}

}  // namespace detail

/// Explicit predictor: convection (ENO2), the full deformation-tensor viscous
/// term with face/edge-interpolated viscosity, gravity, and the given face forces
/// divided by the face density. No pressure. Throws on non-finite results.
inline MacVelocity predictor(const MacVelocity& vel, const ScalarField& rho,
                             const ScalarField& mu, const ScalarField& ind,
                             const MacVelocity* force, const FlowParams& fp, double dt,
                             const VelocityBC* bc = nullptr) {
    const GridSpec& g = vel.grid;
    MacVelocity out = vel;

    // raw-array views with the ghost offset baked in
    auto U = [&](int i, int j, int k) { return vel.fu(i, j, k); };
    auto V = [&](int i, int j, int k) { return vel.fv(i, j, k); };
    auto W = [&](int i, int j, int k) { return vel.fw(i, j, k); };

    const double hx = g.hx, hy = g.hy, hz = g.hz;

    // u faces: interior i in [1, nx-1] on closed axes, [0, nx-1] on periodic
    const bool perx = g.periodic_axis(0), pery = g.periodic_axis(1), perz = g.periodic_axis(2);
    int iu0 = perx ? 0 : 1, iu1 = perx ? g.nx - 1 : g.nx - 1;

    parallel_for(0, g.nz, [&](int k) {
        for (int j = 0; j < g.ny; ++j)
            for (int i = iu0; i <= iu1; ++i) {
                double uc = U(i, j, k);
                double vc = 0.25 * (V(i - 1, j, k) + V(i, j, k) + V(i - 1, j + 1, k) +
                                    V(i, j + 1, k));
                double wc = 0.25 * (W(i - 1, j, k) + W(i, j, k) + W(i - 1, j, k + 1) +
                                    W(i, j, k + 1));
                double conv = uc * detail::conv_deriv(vel.u, i + 2, j + 2, k + 2, 0, hx, uc) +
                              vc * detail::conv_deriv(vel.u, i + 2, j + 2, k + 2, 1, hy, vc) +
                              wc * detail::conv_deriv(vel.u, i + 2, j + 2, k + 2, 2, hz, wc);

                double mu_e = mu(i, j, k), mu_w = mu(i - 1, j, k);
                double txx = (2.0 * mu_e * (U(i + 1, j, k) - U(i, j, k)) / hx -
                              2.0 * mu_w * (U(i, j, k) - U(i - 1, j, k)) / hx) / hx;
                auto mu_edge_y = [&](int jj) {
                    return 0.25 * (mu(i - 1, jj - 1, k) + mu(i, jj - 1, k) +
                                   mu(i - 1, jj, k) + mu(i, jj, k));
                };
                double txy_hi = mu_edge_y(j + 1) * ((U(i, j + 1, k) - U(i, j, k)) / hy +
                                                    (V(i, j + 1, k) - V(i - 1, j + 1, k)) / hx);
                double txy_lo = mu_edge_y(j) * ((U(i, j, k) - U(i, j - 1, k)) / hy +
                                                (V(i, j, k) - V(i - 1, j, k)) / hx);
                auto mu_edge_z = [&](int kk) {
                    return 0.25 * (mu(i - 1, j, kk - 1) + mu(i, j, kk - 1) +
                                   mu(i - 1, j, kk) + mu(i, j, kk));
                };
                double txz_hi = mu_edge_z(k + 1) * ((U(i, j, k + 1) - U(i, j, k)) / hz +
                                                    (W(i, j, k + 1) - W(i - 1, j, k + 1)) / hx);
                double txz_lo = mu_edge_z(k) * ((U(i, j, k) - U(i, j, k - 1)) / hz +
                                                (W(i, j, k) - W(i - 1, j, k)) / hx);
                double visc = txx + (txy_hi - txy_lo) / hy + (txz_hi - txz_lo) / hz;

                double rho_f = detail::harmonic_face(rho(i - 1, j, k), rho(i, j, k));
                double ind_f = 0.5 * (ind(i - 1, j, k) + ind(i, j, k));
                double body = fp.body_force1.x * (1.0 - ind_f) + fp.body_force2.x * ind_f;
                double f = force ? force->fu(i, j, k) : 0.0;
                out.fu(i, j, k) =
                    uc + dt * (-conv + (visc + f + body) / rho_f + fp.gravity.x);
            }
    });

    int jv0 = pery ? 0 : 1, jv1 = pery ? g.ny - 1 : g.ny - 1;
    parallel_for(0, g.nz, [&](int k) {
        for (int j = jv0; j <= jv1; ++j)
            for (int i = 0; i < g.nx; ++i) {
                double vc = V(i, j, k);
                double uc = 0.25 * (U(i, j - 1, k) + U(i + 1, j - 1, k) + U(i, j, k) +
                                    U(i + 1, j, k));
                double wc = 0.25 * (W(i, j - 1, k) + W(i, j, k) + W(i, j - 1, k + 1) +
                                    W(i, j, k + 1));
                double conv = uc * detail::conv_deriv(vel.v, i + 2, j + 2, k + 2, 0, hx, uc) +
                              vc * detail::conv_deriv(vel.v, i + 2, j + 2, k + 2, 1, hy, vc) +
                              wc * detail::conv_deriv(vel.v, i + 2, j + 2, k + 2, 2, hz, wc);

                double tyy = (2.0 * mu(i, j, k) * (V(i, j + 1, k) - V(i, j, k)) / hy -
                              2.0 * mu(i, j - 1, k) * (V(i, j, k) - V(i, j - 1, k)) / hy) / hy;
                auto mu_edge_x = [&](int ii) {
                    return 0.25 * (mu(ii - 1, j - 1, k) + mu(ii, j - 1, k) +
                                   mu(ii - 1, j, k) + mu(ii, j, k));
                };
                double tyx_hi = mu_edge_x(i + 1) * ((V(i + 1, j, k) - V(i, j, k)) / hx +
                                                    (U(i + 1, j, k) - U(i + 1, j - 1, k)) / hy);
                double tyx_lo = mu_edge_x(i) * ((V(i, j, k) - V(i - 1, j, k)) / hx +
                                                (U(i, j, k) - U(i, j - 1, k)) / hy);
                auto mu_edge_z = [&](int kk) {
                    return 0.25 * (mu(i, j - 1, kk - 1) + mu(i, j, kk - 1) +
                                   mu(i, j - 1, kk) + mu(i, j, kk));
                };
                double tyz_hi = mu_edge_z(k + 1) * ((V(i, j, k + 1) - V(i, j, k)) / hz +
                                                    (W(i, j, k + 1) - W(i, j - 1, k + 1)) / hy);
                double tyz_lo = mu_edge_z(k) * ((V(i, j, k) - V(i, j, k - 1)) / hz +
                                                (W(i, j, k) - W(i, j - 1, k)) / hy);
                double visc = (tyx_hi - tyx_lo) / hx + tyy + (tyz_hi - tyz_lo) / hz;

                double rho_f = detail::harmonic_face(rho(i, j - 1, k), rho(i, j, k));
                double ind_f = 0.5 * (ind(i, j - 1, k) + ind(i, j, k));
                double body = fp.body_force1.y * (1.0 - ind_f) + fp.body_force2.y * ind_f;
                double f = force ? force->fv(i, j, k) : 0.0;
                out.fv(i, j, k) =
                    vc + dt * (-conv + (visc + f + body) / rho_f + fp.gravity.y);
            }
    });

    int kw0 = perz ? 0 : 1, kw1 = perz ? g.nz - 1 : g.nz - 1;
    parallel_for(kw0, kw1 + 1, [&](int k) {
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                double wc = W(i, j, k);
                double uc = 0.25 * (U(i, j, k - 1) + U(i + 1, j, k - 1) + U(i, j, k) +
                                    U(i + 1, j, k));
                double vc = 0.25 * (V(i, j, k - 1) + V(i, j + 1, k - 1) + V(i, j, k) +
                                    V(i, j + 1, k));
                double conv = uc * detail::conv_deriv(vel.w, i + 2, j + 2, k + 2, 0, hx, uc) +
                              vc * detail::conv_deriv(vel.w, i + 2, j + 2, k + 2, 1, hy, vc) +
                              wc * detail::conv_deriv(vel.w, i + 2, j + 2, k + 2, 2, hz, wc);

                double tzz = (2.0 * mu(i, j, k) * (W(i, j, k + 1) - W(i, j, k)) / hz -
                              2.0 * mu(i, j, k - 1) * (W(i, j, k) - W(i, j, k - 1)) / hz) / hz;
                auto mu_edge_x = [&](int ii) {
                    return 0.25 * (mu(ii - 1, j, k - 1) + mu(ii, j, k - 1) +
                                   mu(ii - 1, j, k) + mu(ii, j, k));
                };
                double tzx_hi = mu_edge_x(i + 1) * ((W(i + 1, j, k) - W(i, j, k)) / hx +
                                                    (U(i + 1, j, k) - U(i + 1, j, k - 1)) / hz);
                double tzx_lo = mu_edge_x(i) * ((W(i, j, k) - W(i - 1, j, k)) / hx +
                                                (U(i, j, k) - U(i, j, k - 1)) / hz);
                auto mu_edge_y = [&](int jj) {
                    return 0.25 * (mu(i, jj - 1, k - 1) + mu(i, jj, k - 1) +
                                   mu(i, jj - 1, k) + mu(i, jj, k));
                };
                double tzy_hi = mu_edge_y(j + 1) * ((W(i, j + 1, k) - W(i, j, k)) / hy +
                                                    (V(i, j + 1, k) - V(i, j + 1, k - 1)) / hz);
                double tzy_lo = mu_edge_y(j) * ((W(i, j, k) - W(i, j - 1, k)) / hy +
                                                (V(i, j, k) - V(i, j, k - 1)) / hz);
                double visc = (tzx_hi - tzx_lo) / hx + (tzy_hi - tzy_lo) / hy + tzz;

                double rho_f = detail::harmonic_face(rho(i, j, k - 1), rho(i, j, k));
                double ind_f = 0.5 * (ind(i, j, k - 1) + ind(i, j, k));
                double body = fp.body_force1.z * (1.0 - ind_f) + fp.body_force2.z * ind_f;
                double f = force ? force->fw(i, j, k) : 0.0;
                out.fw(i, j, k) =
                    wc + dt * (-conv + (visc + f + body) / rho_f + fp.gravity.z);
            }
    });

    apply_boundary(out, bc);

    double m = max_abs_velocity(out);
    if (!std::isfinite(m))
        throw SolverError("predictor: velocity diverged (non-finite values)");
    return out;
}

struct ProjectionResult {
    ScalarField pressure;
    int iterations = 0;
    double residual = 0.0;
};

/// Builds the multigrid hierarchy for the current density field. beta = 1/rho on
/// faces (harmonic-mean density); closed boundary faces carry beta = 0.
inline mg::Hierarchy build_pressure_hierarchy(const ScalarField& rho) {
    const GridSpec& g = rho.grid;
    mg::Level fine(g.nx, g.ny, g.nz, g.hx, g.hy, g.hz,
                   {g.periodic_axis(0), g.periodic_axis(1), g.periodic_axis(2)});
    for (int k = 0; k < g.nz; ++k)
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i <= g.nx; ++i) {
                bool wall = !g.periodic_axis(0) && (i == 0 || i == g.nx);
                fine.bx(i, j, k) =
                    wall ? 0.0 : 1.0 / detail::harmonic_face(rho(i - 1, j, k), rho(i, j, k));
            }
    for (int k = 0; k < g.nz; ++k)
        for (int j = 0; j <= g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                bool wall = !g.periodic_axis(1) && (j == 0 || j == g.ny);
                fine.by(i, j, k) =
                    wall ? 0.0 : 1.0 / detail::harmonic_face(rho(i, j - 1, k), rho(i, j, k));
            }
    for (int k = 0; k <= g.nz; ++k)
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                bool wall = !g.periodic_axis(2) && (k == 0 || k == g.nz);
                fine.bz(i, j, k) =
                    wall ? 0.0 : 1.0 / detail::harmonic_face(rho(i, j, k - 1), rho(i, j, k));
            }
    mg::Hierarchy h;
    h.build(fine);
    return h;
}

/// Pressure projection: solves div((1/rho) grad P) = div(u*)/dt and subtracts
/// dt (1/rho) grad P from the interior faces, leaving the discrete divergence at
/// the solver tolerance.
inline ProjectionResult project(MacVelocity& vel, const ScalarField& rho, double dt,
                                const PoissonSettings& settings,
                                const VelocityBC* bc = nullptr) {
    const GridSpec& g = vel.grid;
    apply_boundary(vel, bc);
    mg::Hierarchy h = build_pressure_hierarchy(rho);
    mg::Level& fine = h.levels[0];

    ScalarField div = divergence(vel);
    Array3 rhs(g.nx, g.ny, g.nz);
    for_cells(g, [&](int i, int j, int k) { rhs(i, j, k) = div(i, j, k) / dt; });

    Array3 p(g.nx, g.ny, g.nz);
    PoissonResult pr = solve_variable_poisson(h, rhs, p, settings);

    ProjectionResult out{ScalarField(g), pr.iterations, pr.residual};
    for_cells(g, [&](int i, int j, int k) { out.pressure(i, j, k) = p(i, j, k); });
    apply_boundary(out.pressure);

    const ScalarField& P = out.pressure;
    parallel_for(0, g.nz, [&](int k) {
        for (int j = 0; j < g.ny; ++j) {
            int i0 = g.periodic_axis(0) ? 0 : 1;
            for (int i = i0; i < g.nx; ++i)
                vel.fu(i, j, k) -=
                    dt * fine.bx(i, j, k) * (P(i, j, k) - P(i - 1, j, k)) / g.hx;
        }
    });
    parallel_for(0, g.nz, [&](int k) {
        int j0 = g.periodic_axis(1) ? 0 : 1;
        for (int j = j0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                vel.fv(i, j, k) -=
                    dt * fine.by(i, j, k) * (P(i, j, k) - P(i, j - 1, k)) / g.hy;
    });
    int k0 = g.periodic_axis(2) ? 0 : 1;
    parallel_for(k0, g.nz, [&](int k) {
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                vel.fw(i, j, k) -=
                    dt * fine.bz(i, j, k) * (P(i, j, k) - P(i, j, k - 1)) / g.hz;
    });
    apply_boundary(vel, bc);
    return out;
}

}  // namespace lcrm
