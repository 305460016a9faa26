#pragma once

#include <cmath>
#include <vector>

#include "lcrm/advect.hpp"
#include "lcrm/distance.hpp"
#include "lcrm/field.hpp"
#include "lcrm/indicator.hpp"

namespace lcrm {

/// Phase-1 cell adjacent to the interface whose value enforces the interfacial
/// Neumann condition; ds_min is the distance to the interface recorded by the
/// distance build, elem the nearest front element.
struct GhostCell {
    int i = 0, j = 0, k = 0;
    double ds_min = 0.0;
    int32_t elem = -1;
};

/// Cells carrying bulk concentration: phase 2 (phi > 0).
inline CellMask phase2_mask(const DistanceField& dist) {
    const GridSpec& g = dist.phi.grid;
    CellMask m(g);
    for_cells(g, [&](int i, int j, int k) {
        if (dist.phi(i, j, k) > 0.0) m.set(i, j, k, 1);
    });
    return m;
}

/// Phase-1 cells with at least one phase-2 6-neighbor. Neighbor signs are read
/// through the ghost layer, so walls do not generate spurious entries.
inline std::vector<GhostCell> identify_ghosts(const DistanceField& dist) {
    const GridSpec& g = dist.phi.grid;
    const ScalarField& phi = dist.phi;
    std::vector<std::vector<GhostCell>> slabs(static_cast<size_t>(g.nz));
    parallel_for(0, g.nz, [&](int k) {
        auto& out = slabs[static_cast<size_t>(k)];
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                if (phi(i, j, k) > 0.0) continue;
                bool adjacent = phi(i + 1, j, k) > 0.0 || phi(i - 1, j, k) > 0.0 ||
                                phi(i, j + 1, k) > 0.0 || phi(i, j - 1, k) > 0.0 ||
                                phi(i, j, k + 1) > 0.0 || phi(i, j, k - 1) > 0.0;
                if (!adjacent) continue;
                out.push_back({i, j, k, std::abs(phi(i, j, k)),
                               dist.in_band(i, j, k) ? dist.nearest(i, j, k) : -1});
            }
    });
    std::vector<GhostCell> ghosts;
    for (auto& s : slabs) ghosts.insert(ghosts.end(), s.begin(), s.end());
    return ghosts;
}

/// Sharp Neumann source condition: C_ghost = C_xf - (S_Gamma / D_c2) ds_min, with
/// C_xf interpolated at the interface foot point of the ghost cell.
inline void fill_ghosts(ScalarField& c, const std::vector<GhostCell>& ghosts,
                        const std::vector<double>& source_per_elem, double d_c2,
                        const DistanceField& dist, const CellMask& phase2) {
    const GridSpec& g = c.grid;
    parallel_for(0, static_cast<int>(ghosts.size()), [&](int n) {
        const GhostCell& gc = ghosts[static_cast<size_t>(n)];
        Vec3 x = g.cell_center(gc.i, gc.j, gc.k);
        double phi_val = dist.phi(gc.i, gc.j, gc.k);
        Vec3 nrm = sampled_gradient(dist.phi, x);
        double nn = norm(nrm);
        Vec3 foot = nn > 1e-12 ? x - (phi_val / nn) * nrm : x;
        double c_xf = sample_masked(c, phase2, foot).value_or(c(gc.i, gc.j, gc.k));
        double src = 0.0;
        if (gc.elem >= 0 && gc.elem < static_cast<int32_t>(source_per_elem.size()))
            src = source_per_elem[static_cast<size_t>(gc.elem)];
        c(gc.i, gc.j, gc.k) = c_xf - (src / d_c2) * gc.ds_min;
    });
    apply_boundary(c);
}

namespace detail {
/// Upwind derivative that degrades to first order where the stencil leaves the
/// valid (phase-2 or ghost) region.
inline double masked_upwind_deriv(const double f[5], const bool ok[5], double h,
                                  double sign) {
    if (sign >= 0.0) {
        if (!ok[1] || !ok[2]) return 0.0;
        double d1 = (f[2] - f[1]) / h;
        if (!ok[0] || !ok[3]) return d1;
        return d1 + eno::minmod(f[3] - 2.0 * f[2] + f[1], f[2] - 2.0 * f[1] + f[0]) /
                        (2.0 * h);
    }
    if (!ok[2] || !ok[3]) return 0.0;
    double d1 = (f[3] - f[2]) / h;
    if (!ok[4] || !ok[1]) return d1;
    return d1 - eno::minmod(f[4] - 2.0 * f[3] + f[2], f[3] - 2.0 * f[2] + f[1]) /
                    (2.0 * h);
}
}  // namespace detail

struct BulkStepStats {
    double clamped_mass = 0.0;  // negative concentrations trimmed, volume-weighted
};

/// One explicit step of the bulk transport: ENO2 convection plus central
/// diffusion, applied at phase-2 cells only. Ghost and deep phase-1 cells are
/// left untouched (ghosts are refreshed by fill_ghosts each substep).
inline ScalarField step_bulk(const ScalarField& c, const MacVelocity* vel,
                             const DistanceField& dist, double d_c2, double dt,
                             BulkStepStats* stats = nullptr) {
    const GridSpec& g = c.grid;
    double hmin = g.min_h();
    if (d_c2 > 0.0 && dt > 0.25 * hmin * hmin / d_c2 * (1.0 + 1e-12))
        throw StabilityError("step_bulk: dt exceeds 0.25 h^2 / D_c2");
    if (vel) {
        double umax = max_abs_velocity(*vel);
        if (umax * dt / hmin > 1.0 + 1e-12)
            throw StabilityError("step_bulk: convective CFL violated");
    }

    const ScalarField& phi = dist.phi;
    auto valid = [&](int i, int j, int k) {
        // phase-2 cells and their ghost layer carry usable values
        if (phi(i, j, k) > 0.0) return true;
        return phi(i + 1, j, k) > 0.0 || phi(i - 1, j, k) > 0.0 || phi(i, j + 1, k) > 0.0 ||
               phi(i, j - 1, k) > 0.0 || phi(i, j, k + 1) > 0.0 || phi(i, j, k - 1) > 0.0;
    };

    ScalarField out = c;
    std::vector<double> clamp_slab(static_cast<size_t>(g.nz), 0.0);
    parallel_for(0, g.nz, [&](int k) {
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                if (phi(i, j, k) <= 0.0) continue;  // ghosts hold the BC, deep cells 0

                double conv = 0.0;
                if (vel) {
                    double uc = 0.5 * (vel->fu(i, j, k) + vel->fu(i + 1, j, k));
                    double vc = 0.5 * (vel->fv(i, j, k) + vel->fv(i, j + 1, k));
                    double wc = 0.5 * (vel->fw(i, j, k) + vel->fw(i, j, k + 1));
                    double fx[5], fy[5], fz[5];
                    bool ox[5], oy[5], oz[5];
                    for (int m = -2; m <= 2; ++m) {
                        fx[m + 2] = c(i + m, j, k);
                        ox[m + 2] = valid(i + m, j, k);
                        fy[m + 2] = c(i, j + m, k);
                        oy[m + 2] = valid(i, j + m, k);
                        fz[m + 2] = c(i, j, k + m);
                        oz[m + 2] = valid(i, j, k + m);
                    }
                    conv = uc * detail::masked_upwind_deriv(fx, ox, g.hx, uc) +
                           vc * detail::masked_upwind_deriv(fy, oy, g.hy, vc) +
                           wc * detail::masked_upwind_deriv(fz, oz, g.hz, wc);
                }

                double lap = (c(i + 1, j, k) - 2.0 * c(i, j, k) + c(i - 1, j, k)) /
                                 (g.hx * g.hx) +
                             (c(i, j + 1, k) - 2.0 * c(i, j, k) + c(i, j - 1, k)) /
                                 (g.hy * g.hy) +
                             (c(i, j, k + 1) - 2.0 * c(i, j, k) + c(i, j, k - 1)) /
                                 (g.hz * g.hz);

                double raw = c(i, j, k) + dt * (-conv + d_c2 * lap);
                if (raw < 0.0) {
                    clamp_slab[static_cast<size_t>(k)] += -raw * g.cell_volume();
                    raw = 0.0;
                }
                out(i, j, k) = raw;
            }
    });
    if (stats)
        for (double v : clamp_slab) stats->clamped_mass += v;
    apply_boundary(out);
    return out;
}

/// Indicator-weighted bulk surfactant content.
inline double bulk_mass(const ScalarField& c, const IndicatorField& ind) {
    const GridSpec& g = c.grid;
    double vol = g.cell_volume();
    return ordered_sum(0, g.nz, [&](int k) {
        double s = 0.0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) s += c(i, j, k) * ind.ind(i, j, k);
        return s * vol;
    });
}

}  // namespace lcrm
