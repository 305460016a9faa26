#pragma once

#include <cmath>
#include <vector>

#include "lcrm/error.hpp"
#include "lcrm/field.hpp"
#include "lcrm/front.hpp"

namespace lcrm {

/// Inner branch of the Peskin--McQueen discrete delta, valid for |r| <= 1.
inline double peskin_delta1(double r) {
    double a = std::abs(r);
    if (a > 1.0 + 1e-14) throw OutOfDomainError("peskin_delta1: |r| > 1");
    a = std::min(a, 1.0);
    return (3.0 - 2.0 * a + std::sqrt(1.0 + 4.0 * a - 4.0 * a * a)) / 8.0;
}

/// Full kernel: support |r| < 2, partition of unity on any unit-spaced lattice.
inline double peskin_delta(double r) {
    double a = std::abs(r);
    if (a >= 2.0) return 0.0;
    if (a <= 1.0) return peskin_delta1(a);
    return 0.5 - peskin_delta1(2.0 - a);
}

/// 4x4x4 kernel footprint on a lattice. Weight of cell (base+a, base+b, base+c)
/// is wx[a]*wy[b]*wz[c] * inv_vol; the weights sum to 1 before the volume factor.
struct KernelStamp {
    int base[3] = {0, 0, 0};
    double wx[4], wy[4], wz[4];
    double inv_vol = 0.0;
};

namespace detail {
inline void stamp_axis(double x, double x0, double h, double center_offset, int& base,
                       double w[4]) {
    double gx = (x - x0) / h - center_offset;
    base = static_cast<int>(std::floor(gx)) - 1;
    for (int m = 0; m < 4; ++m) w[m] = peskin_delta(gx - (base + m));
}
}  // namespace detail

/// Stamp on the cell-center lattice.
inline KernelStamp kernel_stamp(const GridSpec& g, Vec3 p) {
    p = g.wrap(p);
    KernelStamp s;
    detail::stamp_axis(p.x, g.origin.x, g.hx, 0.5, s.base[0], s.wx);
    detail::stamp_axis(p.y, g.origin.y, g.hy, 0.5, s.base[1], s.wy);
    detail::stamp_axis(p.z, g.origin.z, g.hz, 0.5, s.base[2], s.wz);
    s.inv_vol = 1.0 / g.cell_volume();
    return s;
}

namespace detail {
inline int wrap_cell(const GridSpec& g, int q, int axis) {
    int n = g.n(axis);
    if (g.periodic_axis(axis)) {
        q %= n;
        if (q < 0) q += n;
        return q;
    }
    return (q < 0 || q >= n) ? -1 : q;
}
}  // namespace detail

/// Adds amount * D_ijk(pos) over the stamp of `pos` (cell-centered lattice).
/// Serial scatter; callers loop points in a fixed order for determinism.
inline void scatter_to_cells(ScalarField& f, const Vec3& pos, double amount) {
    const GridSpec& g = f.grid;
    KernelStamp s = kernel_stamp(g, pos);
    for (int c = 0; c < 4; ++c) {
        int k = detail::wrap_cell(g, s.base[2] + c, 2);
        if (k < 0) continue;
        for (int b = 0; b < 4; ++b) {
            int j = detail::wrap_cell(g, s.base[1] + b, 1);
            if (j < 0) continue;
            double wzy = s.wz[c] * s.wy[b];
            for (int a = 0; a < 4; ++a) {
                int i = detail::wrap_cell(g, s.base[0] + a, 0);
                if (i < 0) continue;
                f(i, j, k) += amount * s.wx[a] * wzy * s.inv_vol;
            }
        }
    }
}

/// Adds a vector amount onto the three staggered face lattices.
inline void scatter_to_faces(MacVelocity& f, const Vec3& pos, const Vec3& amount) {
    const GridSpec& g = f.grid;
    Vec3 p = g.wrap(pos);
    for (int comp = 0; comp < 3; ++comp) {
        if (amount[comp] == 0.0) continue;
        KernelStamp s;
        detail::stamp_axis(p.x, g.origin.x, g.hx, comp == 0 ? 0.0 : 0.5, s.base[0], s.wx);
        detail::stamp_axis(p.y, g.origin.y, g.hy, comp == 1 ? 0.0 : 0.5, s.base[1], s.wy);
        detail::stamp_axis(p.z, g.origin.z, g.hz, comp == 2 ? 0.0 : 0.5, s.base[2], s.wz);
        s.inv_vol = 1.0 / g.cell_volume();
        // face index range along the staggered axis is [0, n] on closed axes
        auto wrap_face = [&](int q, int axis) -> int {
            int n = g.n(axis);
            if (axis == comp) {
                if (g.periodic_axis(axis)) {
                    q %= n;
                    if (q < 0) q += n;
                    return q;
                }
                return (q < 0 || q > n) ? -1 : q;
            }
            return detail::wrap_cell(g, q, axis);
        };
        for (int c = 0; c < 4; ++c) {
            int k = wrap_face(s.base[2] + c, 2);
            if (k < 0) continue;
            for (int b = 0; b < 4; ++b) {
                int j = wrap_face(s.base[1] + b, 1);
                if (j < 0) continue;
                double wzy = s.wz[c] * s.wy[b];
                for (int a = 0; a < 4; ++a) {
                    int i = wrap_face(s.base[0] + a, 0);
                    if (i < 0) continue;
                    f.face(comp, i, j, k) += amount[comp] * s.wx[a] * wzy * s.inv_vol;
                }
            }
        }
    }
}

struct DistPoint {
    Vec3 pos;
    double value = 0.0;
    double area = 0.0;
};

/// Peskin distribution of point-carried surface data onto the grid:
/// M_ijk = sum_f value_f D_ijk(x_f) dA_f. The integral of the result times the
/// cell volume equals sum value*area to round-off (away from closed walls).
inline ScalarField distribute(const std::vector<DistPoint>& points, const GridSpec& grid) {
    ScalarField out(grid);
    for (const DistPoint& p : points)
        scatter_to_cells(out, p.pos, p.value * p.area);
    apply_boundary(out);
    return out;
}

/// Adjoint sampling: sum_ijk field_ijk D_ijk(point) * cell volume.
inline double kernel_interpolate(const ScalarField& f, const Vec3& pos) {
    const GridSpec& g = f.grid;
    KernelStamp s = kernel_stamp(g, pos);
    double acc = 0.0;
    for (int c = 0; c < 4; ++c) {
        int k = detail::wrap_cell(g, s.base[2] + c, 2);
        if (k < 0) continue;
        for (int b = 0; b < 4; ++b) {
            int j = detail::wrap_cell(g, s.base[1] + b, 1);
            if (j < 0) continue;
            double wzy = s.wz[c] * s.wy[b];
            for (int a = 0; a < 4; ++a) {
                int i = detail::wrap_cell(g, s.base[0] + a, 0);
                if (i < 0) continue;
                acc += f(i, j, k) * s.wx[a] * wzy;
            }
        }
    }
    return acc;  // weights * inv_vol * vol collapse to the plain tensor weights
}

/// Eulerian surface-surfactant field: gamma = M_s / Q with Q floored, plus the
/// in-band mask (cells with meaningful kernel coverage).
struct SurfField {
    ScalarField gamma;
    ScalarField q;
    CellMask band;
};

inline SurfField normalized_surface_field(const FrontMesh& mesh, const GridSpec& grid) {
    if (mesh.empty()) throw GeometryError("normalized_surface_field: empty mesh");
    SurfField out{ScalarField(grid), ScalarField(grid), CellMask(grid)};
    for (const FrontElement& e : mesh.elements) {
        double area = element_area(e);
        Vec3 c = element_centroid(e);
        scatter_to_cells(out.gamma, c, e.gamma * area);  // M_s accumulates here first
        scatter_to_cells(out.q, c, area);
    }
    const double eps_q = 1e-8 / grid.cell_volume();
    for_cells(grid, [&](int i, int j, int k) {
        double q = out.q(i, j, k);
        if (q >= eps_q) {
            out.gamma(i, j, k) /= q;
            out.band.set(i, j, k, 1);
        } else {
            out.gamma(i, j, k) = 0.0;
        }
    });
    apply_boundary(out.gamma);
    apply_boundary(out.q);
    return out;
}

}  // namespace lcrm
