#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "lcrm/error.hpp"
#include "lcrm/grid.hpp"
#include "lcrm/parallel.hpp"
#include "lcrm/vec3.hpp"

namespace lcrm {

/// Plain 3D array, x-fastest contiguous.
struct Array3 {
    int sx = 0, sy = 0, sz = 0;
    std::vector<double> data;

    Array3() = default;
    Array3(int x, int y, int z, double init = 0.0)
        : sx(x), sy(y), sz(z), data(static_cast<size_t>(x) * y * z, init) {}

    size_t idx(int i, int j, int k) const {
        return (static_cast<size_t>(k) * sy + j) * sx + i;
    }
    double& operator()(int i, int j, int k) { return data[idx(i, j, k)]; }
    double operator()(int i, int j, int k) const { return data[idx(i, j, k)]; }

    void fill(double v) { std::fill(data.begin(), data.end(), v); }
};

/// Cell-centered scalar with a ghost layer of width 2 on every side.
/// Valid indices are i in [-2, nx+2), etc.
struct ScalarField {
    GridSpec grid;
    Array3 a;

    ScalarField() = default;
    explicit ScalarField(const GridSpec& g, double init = 0.0)
        : grid(g), a(g.nx + 4, g.ny + 4, g.nz + 4, init) {}

    double& operator()(int i, int j, int k) { return a(i + 2, j + 2, k + 2); }
    double operator()(int i, int j, int k) const { return a(i + 2, j + 2, k + 2); }

    void fill(double v) { a.fill(v); }
};

/// Face-centered (MAC) velocity. u has nx+1 physical faces along x (indices 0..nx),
/// plus two ghost faces per side; analogously for v, w.
struct MacVelocity {
    GridSpec grid;
    Array3 u, v, w;

    MacVelocity() = default;
    explicit MacVelocity(const GridSpec& g, Vec3 init = {})
        : grid(g),
          u(g.nx + 5, g.ny + 4, g.nz + 4, init.x),
          v(g.nx + 4, g.ny + 5, g.nz + 4, init.y),
          w(g.nx + 4, g.ny + 4, g.nz + 5, init.z) {}

    Array3& comp(int c) { return c == 0 ? u : (c == 1 ? v : w); }
    const Array3& comp(int c) const { return c == 0 ? u : (c == 1 ? v : w); }

    double& fu(int i, int j, int k) { return u(i + 2, j + 2, k + 2); }
    double fu(int i, int j, int k) const { return u(i + 2, j + 2, k + 2); }
    double& fv(int i, int j, int k) { return v(i + 2, j + 2, k + 2); }
    double fv(int i, int j, int k) const { return v(i + 2, j + 2, k + 2); }
    double& fw(int i, int j, int k) { return w(i + 2, j + 2, k + 2); }
    double fw(int i, int j, int k) const { return w(i + 2, j + 2, k + 2); }

    double face(int c, int i, int j, int k) const {
        return comp(c)(i + 2, j + 2, k + 2);
    }
    double& face(int c, int i, int j, int k) {
        return comp(c)(i + 2, j + 2, k + 2);
    }
};

/// Per-face fixed values for scalar fixed_value boundaries.
struct ScalarBC {
    std::array<double, 6> fixed{};
};

/// Prescribed wall velocities (tangential parts drive no-slip walls; the normal
/// part is the pinned face value for fixed_value faces).
struct VelocityBC {
    std::array<Vec3, 6> wall_velocity{};
};

template <class F>
inline void for_cells(const GridSpec& g, F&& body) {
    parallel_for(0, g.nz, [&](int k) {
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) body(i, j, k);
    });
}

template <class F>
inline void for_cells_serial(const GridSpec& g, F&& body) {
    for (int k = 0; k < g.nz; ++k)
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) body(i, j, k);
}

// ---------------------------------------------------------------------------
// Boundary application
// ---------------------------------------------------------------------------

/// Fills the two ghost layers of a cell-centered field according to the per-face
/// boundary kind: periodic copy, reflection for no_slip, copy for zero_gradient,
/// mirror-about-value for fixed_value.
inline void apply_boundary(ScalarField& f, const ScalarBC* bcv = nullptr) {
    const GridSpec& g = f.grid;
    // Axis passes in x, y, z order; each pass spans the full extended range of the
    // other two axes so edge/corner ghosts end up consistent.
    for (int axis = 0; axis < 3; ++axis) {
        const int n = g.n(axis);
        const int n0 = g.n((axis + 1) % 3), n1 = g.n((axis + 2) % 3);
        BoundaryKind lo = g.bc[2 * axis], hi = g.bc[2 * axis + 1];
        double vlo = bcv ? bcv->fixed[2 * axis] : 0.0;
        double vhi = bcv ? bcv->fixed[2 * axis + 1] : 0.0;
        parallel_for(-2, n1 + 2, [&](int c1) {
            for (int c0 = -2; c0 < n0 + 2; ++c0) {
                auto at = [&](int q) -> double& {
                    int ijk[3];
                    ijk[axis] = q;
                    ijk[(axis + 1) % 3] = c0;
                    ijk[(axis + 2) % 3] = c1;
                    return f(ijk[0], ijk[1], ijk[2]);
                };
                switch (lo) {
                    case BoundaryKind::periodic:
                        at(-1) = at(n - 1); at(-2) = at(n - 2); break;
                    case BoundaryKind::no_slip_wall:
                        at(-1) = at(0); at(-2) = at(1); break;
                    case BoundaryKind::zero_gradient:
                        at(-1) = at(0); at(-2) = at(0); break;
                    case BoundaryKind::fixed_value:
                        at(-1) = 2.0 * vlo - at(0); at(-2) = 2.0 * vlo - at(1); break;
                }
                switch (hi) {
                    case BoundaryKind::periodic:
                        at(n) = at(0); at(n + 1) = at(1); break;
                    case BoundaryKind::no_slip_wall:
                        at(n) = at(n - 1); at(n + 1) = at(n - 2); break;
                    case BoundaryKind::zero_gradient:
                        at(n) = at(n - 1); at(n + 1) = at(n - 1); break;
                    case BoundaryKind::fixed_value:
                        at(n) = 2.0 * vhi - at(n - 1); at(n + 1) = 2.0 * vhi - at(n - 2); break;
                }
            }
        });
    }
}

/// Fills ghost faces and pins wall-normal faces of a MAC velocity.
inline void apply_boundary(MacVelocity& vel, const VelocityBC* bcv = nullptr) {
    const GridSpec& g = vel.grid;
    for (int c = 0; c < 3; ++c) {
        for (int axis = 0; axis < 3; ++axis) {
            const int n = g.n(axis);
            // extents of the other two axes for this component's array
            const int a0 = (axis + 1) % 3, a1 = (axis + 2) % 3;
            const int n0 = g.n(a0) + (a0 == c ? 1 : 0);
            const int n1 = g.n(a1) + (a1 == c ? 1 : 0);
            BoundaryKind lo = g.bc[2 * axis], hi = g.bc[2 * axis + 1];
            Vec3 wlo = bcv ? bcv->wall_velocity[2 * axis] : Vec3{};
            Vec3 whi = bcv ? bcv->wall_velocity[2 * axis + 1] : Vec3{};
            const bool normal = (axis == c);
            parallel_for(-2, n1 + 2, [&](int c1) {
                for (int c0 = -2; c0 < n0 + 2; ++c0) {
                    auto at = [&](int q) -> double& {
                        int ijk[3];
                        ijk[axis] = q;
                        ijk[a0] = c0;
                        ijk[a1] = c1;
                        return vel.face(c, ijk[0], ijk[1], ijk[2]);
                    };
                    if (normal) {
                        switch (lo) {
                            case BoundaryKind::periodic:
                                at(-1) = at(n - 1); at(-2) = at(n - 2); break;
                            case BoundaryKind::no_slip_wall:
                            case BoundaryKind::fixed_value: {
                                double ub = (lo == BoundaryKind::fixed_value) ? wlo[c] : 0.0;
                                at(0) = ub;
                                at(-1) = 2.0 * ub - at(1);
                                at(-2) = 2.0 * ub - at(2);
                                break;
                            }
                            case BoundaryKind::zero_gradient:
                                at(0) = at(1); at(-1) = at(0); at(-2) = at(0); break;
                        }
                        switch (hi) {
                            case BoundaryKind::periodic:
                                at(n) = at(0); at(n + 1) = at(1); at(n + 2) = at(2); break;
                            case BoundaryKind::no_slip_wall:
                            case BoundaryKind::fixed_value: {
                                double ub = (hi == BoundaryKind::fixed_value) ? whi[c] : 0.0;
                                at(n) = ub;
                                at(n + 1) = 2.0 * ub - at(n - 1);
                                at(n + 2) = 2.0 * ub - at(n - 2);
                                break;
                            }
                            case BoundaryKind::zero_gradient:
                                at(n) = at(n - 1); at(n + 1) = at(n); at(n + 2) = at(n); break;
                        }
                    } else {
                        switch (lo) {
                            case BoundaryKind::periodic:
                                at(-1) = at(n - 1); at(-2) = at(n - 2); break;
                            case BoundaryKind::no_slip_wall:
                            case BoundaryKind::fixed_value:
                                at(-1) = 2.0 * wlo[c] - at(0);
                                at(-2) = 2.0 * wlo[c] - at(1);
                                break;
                            case BoundaryKind::zero_gradient:
                                at(-1) = at(0); at(-2) = at(0); break;
                        }
                        switch (hi) {
                            case BoundaryKind::periodic:
                                at(n) = at(0); at(n + 1) = at(1); break;
                            case BoundaryKind::no_slip_wall:
                            case BoundaryKind::fixed_value:
                                at(n) = 2.0 * whi[c] - at(n - 1);
                                at(n + 1) = 2.0 * whi[c] - at(n - 2);
                                break;
                            case BoundaryKind::zero_gradient:
                                at(n) = at(n - 1); at(n + 1) = at(n - 1); break;
                        }
                    }
                }
            });
        }
    }
}

// ---------------------------------------------------------------------------
// Interpolation
// ---------------------------------------------------------------------------

namespace detail {
struct LatticeCoord {
    int base;
    double frac;
};

inline LatticeCoord lattice_coord(double x, double x0, double h, double center_offset) {
    double gx = (x - x0) / h - center_offset;
    double fl = std::floor(gx);
    return {static_cast<int>(fl), gx - fl};
}
}  // namespace detail

/// Trilinear interpolation of a cell-centered scalar; exact for fields linear in
/// position. The point is wrapped on periodic axes and must lie inside the domain
/// on the others.
inline double interpolate_trilinear(const ScalarField& f, Vec3 p) {
    const GridSpec& g = f.grid;
    p = g.wrap(p);
    if (!g.contains(p)) throw OutOfDomainError("interpolate_trilinear: point outside domain");
    auto cx = detail::lattice_coord(p.x, g.origin.x, g.hx, 0.5);
    auto cy = detail::lattice_coord(p.y, g.origin.y, g.hy, 0.5);
    auto cz = detail::lattice_coord(p.z, g.origin.z, g.hz, 0.5);
    double acc = 0.0;
    for (int dk = 0; dk < 2; ++dk)
        for (int dj = 0; dj < 2; ++dj)
            for (int di = 0; di < 2; ++di) {
                double wgt = (di ? cx.frac : 1.0 - cx.frac) * (dj ? cy.frac : 1.0 - cy.frac) *
                             (dk ? cz.frac : 1.0 - cz.frac);
                acc += wgt * f(cx.base + di, cy.base + dj, cz.base + dk);
            }
    return acc;
}

/// Trilinear interpolation of one staggered velocity component.
inline double interpolate_face_component(const MacVelocity& vel, int c, Vec3 p) {
    const GridSpec& g = vel.grid;
    p = g.wrap(p);
    if (!g.contains(p)) throw OutOfDomainError("interpolate_face_component: point outside domain");
    detail::LatticeCoord lc[3];
    for (int a = 0; a < 3; ++a)
        lc[a] = detail::lattice_coord(p[a], g.origin[a], g.h(a), a == c ? 0.0 : 0.5);
    double acc = 0.0;
    for (int dk = 0; dk < 2; ++dk)
        for (int dj = 0; dj < 2; ++dj)
            for (int di = 0; di < 2; ++di) {
                double wgt = (di ? lc[0].frac : 1.0 - lc[0].frac) *
                             (dj ? lc[1].frac : 1.0 - lc[1].frac) *
                             (dk ? lc[2].frac : 1.0 - lc[2].frac);
                acc += wgt * vel.face(c, lc[0].base + di, lc[1].base + dj, lc[2].base + dk);
            }
    return acc;
}

inline Vec3 interpolate_trilinear(const MacVelocity& vel, const Vec3& p) {
    return {interpolate_face_component(vel, 0, p), interpolate_face_component(vel, 1, p),
            interpolate_face_component(vel, 2, p)};
}

/// Cell validity mask over interior cells (no ghosts), x-fastest.
struct CellMask {
    int nx = 0, ny = 0, nz = 0;
    std::vector<uint8_t> valid;

    CellMask() = default;
    explicit CellMask(const GridSpec& g)
        : nx(g.nx), ny(g.ny), nz(g.nz), valid(static_cast<size_t>(g.nx) * g.ny * g.nz, 0) {}

    size_t idx(int i, int j, int k) const {
        return (static_cast<size_t>(k) * ny + j) * nx + i;
    }
    uint8_t operator()(int i, int j, int k) const { return valid[idx(i, j, k)]; }
    void set(int i, int j, int k, uint8_t v) { valid[idx(i, j, k)] = v; }
};

/// Trilinear interpolation restricted to masked-valid cells; weights of invalid
/// cells are dropped and the rest renormalized. Returns nullopt when the whole
/// stencil is invalid.
inline std::optional<double> sample_masked(const ScalarField& f, const CellMask& mask, Vec3 p) {
    const GridSpec& g = f.grid;
    p = g.wrap(p);
    if (!g.contains(p)) return std::nullopt;
    auto cx = detail::lattice_coord(p.x, g.origin.x, g.hx, 0.5);
    auto cy = detail::lattice_coord(p.y, g.origin.y, g.hy, 0.5);
    auto cz = detail::lattice_coord(p.z, g.origin.z, g.hz, 0.5);
    auto wrap_idx = [&](int q, int axis) -> int {
        int n = g.n(axis);
        if (g.periodic_axis(axis)) {
            q %= n;
            if (q < 0) q += n;
            return q;
        }
        return (q < 0 || q >= n) ? -1 : q;
    };
    double acc = 0.0, wsum = 0.0;
    for (int dk = 0; dk < 2; ++dk)
        for (int dj = 0; dj < 2; ++dj)
            for (int di = 0; di < 2; ++di) {
                int i = wrap_idx(cx.base + di, 0);
                int j = wrap_idx(cy.base + dj, 1);
                int k = wrap_idx(cz.base + dk, 2);
                if (i < 0 || j < 0 || k < 0 || !mask(i, j, k)) continue;
                double wgt = (di ? cx.frac : 1.0 - cx.frac) * (dj ? cy.frac : 1.0 - cy.frac) *
                             (dk ? cz.frac : 1.0 - cz.frac);
                acc += wgt * f(i, j, k);
                wsum += wgt;
            }
    if (wsum < 1e-12) return std::nullopt;
    return acc / wsum;
}

inline double max_abs_velocity(const MacVelocity& vel) {
    const GridSpec& g = vel.grid;
    return ordered_max(0, g.nz, [&](int k) {
        double m = 0.0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                m = std::max(m, std::abs(vel.fu(i, j, k)));
                m = std::max(m, std::abs(vel.fv(i, j, k)));
                m = std::max(m, std::abs(vel.fw(i, j, k)));
            }
        return m;
    });
}

}  // namespace lcrm
