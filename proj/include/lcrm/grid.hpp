#pragma once

#include <array>
#include <string>

#include "lcrm/error.hpp"
#include "lcrm/vec3.hpp"

namespace lcrm {

enum class BoundaryKind { periodic, no_slip_wall, zero_gradient, fixed_value };

/// Face ordering used everywhere a per-face quantity appears.
enum Face : int { XLo = 0, XHi = 1, YLo = 2, YHi = 3, ZLo = 4, ZHi = 5 };

inline const char* to_string(BoundaryKind k) {
    switch (k) {
        case BoundaryKind::periodic: return "periodic";
        case BoundaryKind::no_slip_wall: return "no_slip_wall";
        case BoundaryKind::zero_gradient: return "zero_gradient";
        case BoundaryKind::fixed_value: return "fixed_value";
    }
    return "?";
}

/// Uniform Cartesian MAC grid: nx*ny*nz cells of size hx*hy*hz, ghost width 2.
struct GridSpec {
    int nx = 0, ny = 0, nz = 0;
    double hx = 0.0, hy = 0.0, hz = 0.0;
    Vec3 origin{};
    std::array<BoundaryKind, 6> bc{BoundaryKind::periodic, BoundaryKind::periodic,
                                   BoundaryKind::periodic, BoundaryKind::periodic,
                                   BoundaryKind::periodic, BoundaryKind::periodic};

    static constexpr int ghost = 2;

    int n(int axis) const { return axis == 0 ? nx : (axis == 1 ? ny : nz); }
    double h(int axis) const { return axis == 0 ? hx : (axis == 1 ? hy : hz); }
    double length(int axis) const { return n(axis) * h(axis); }
    double min_h() const { return std::min(hx, std::min(hy, hz)); }
    double cell_volume() const { return hx * hy * hz; }

    bool periodic_axis(int axis) const { return bc[2 * axis] == BoundaryKind::periodic; }

    Vec3 cell_center(int i, int j, int k) const {
        return {origin.x + (i + 0.5) * hx, origin.y + (j + 0.5) * hy, origin.z + (k + 0.5) * hz};
    }

    /// Position of a velocity face: component `axis`, face index along that axis.
    Vec3 face_center(int axis, int i, int j, int k) const {
        Vec3 p = cell_center(i, j, k);
        p[axis] -= 0.5 * h(axis);
        return p;
    }

    Vec3 domain_lo() const { return origin; }
    Vec3 domain_hi() const { return {origin.x + length(0), origin.y + length(1), origin.z + length(2)}; }

    /// Wraps periodic coordinates into the domain; leaves non-periodic ones alone.
    Vec3 wrap(Vec3 p) const {
        for (int a = 0; a < 3; ++a) {
            if (!periodic_axis(a)) continue;
            double lo = origin[a], len = length(a);
            double r = std::fmod(p[a] - lo, len);
            if (r < 0.0) r += len;
            p[a] = lo + r;
        }
        return p;
    }

    bool contains(const Vec3& p) const {
        for (int a = 0; a < 3; ++a) {
            if (periodic_axis(a)) continue;
            if (p[a] < origin[a] || p[a] > origin[a] + length(a)) return false;
        }
        return true;
    }

    void validate() const {
        if (nx < 8 || ny < 8 || nz < 8)
            throw ConfigError("grid: nx, ny, nz must each be >= 8");
        if (hx <= 0.0 || hy <= 0.0 || hz <= 0.0)
            throw ConfigError("grid: cell sizes must be positive");
        for (int a = 0; a < 3; ++a) {
            bool lo = bc[2 * a] == BoundaryKind::periodic;
            bool hi = bc[2 * a + 1] == BoundaryKind::periodic;
            if (lo != hi)
                throw ConfigError("grid: periodic boundaries must be paired on axis " +
                                  std::to_string(a));
        }
    }
};

/// Convenience builder for the common cubic-cell case.
inline GridSpec make_grid(int nx, int ny, int nz, Vec3 origin, double h,
                          BoundaryKind kind = BoundaryKind::periodic) {
    GridSpec g;
    g.nx = nx; g.ny = ny; g.nz = nz;
    g.hx = g.hy = g.hz = h;
    g.origin = origin;
    g.bc.fill(kind);
    g.validate();
    return g;
}

}  // namespace lcrm
