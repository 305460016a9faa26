#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "lcrm/error.hpp"
#include "lcrm/field.hpp"
#include "lcrm/grid.hpp"
#include "lcrm/parallel.hpp"
#include "lcrm/vec3.hpp"

namespace lcrm {

/// One interface triangle. The soup carries no connectivity; gamma is the surface
/// surfactant concentration stored at the element, prev_area the pre-advection
/// area used by the area-ratio update.
struct FrontElement {
    Vec3 v1, v2, v3;
    double gamma = 0.0;
    double prev_area = 0.0;
};

struct FrontMesh {
    std::vector<FrontElement> elements;

    bool empty() const { return elements.empty(); }
    size_t size() const { return elements.size(); }
};

/// Degenerate-area threshold, scale-aware in the grid spacing.
inline double geometry_epsilon(double h) { return 1e-12 * h * h; }

inline double element_area(const FrontElement& e) {
    return 0.5 * norm(cross(e.v2 - e.v1, e.v3 - e.v1));
}

inline Vec3 element_centroid(const FrontElement& e) {
    return (e.v1 + e.v2 + e.v3) * (1.0 / 3.0);
}

/// Unit normal from the winding v1->v2->v3; throws on (near-)collinear vertices.
inline Vec3 element_normal(const FrontElement& e, double eps_geom) {
    Vec3 c = cross(e.v2 - e.v1, e.v3 - e.v1);
    double n = norm(c);
    if (0.5 * n <= eps_geom) throw GeometryError("element_normal: degenerate element");
    return c * (1.0 / n);
}

/// Geometry of one element needed by the surfactant and force machinery: area,
/// element normal, per-edge midpoints, lengths, unit tangents, and the two
/// conormals p (from the distance-field normal at the edge midpoint) and p'
/// (from the element normal). Both point outward from the element.
struct ElementFrame {
    double area = 0.0;
    Vec3 normal{};
    Vec3 edge_mid[3];
    double edge_len[3] = {0.0, 0.0, 0.0};
    Vec3 tangent[3];
    Vec3 binormal_p[3];
    Vec3 binormal_pp[3];
    int phi_fallbacks = 0;  // edges where |grad phi| vanished and n_f was used
};

/// Central-difference gradient of a cell-centered field, trilinearly sampled.
inline Vec3 sampled_gradient(const ScalarField& f, const Vec3& p) {
    const GridSpec& g = f.grid;
    Vec3 grad;
    for (int a = 0; a < 3; ++a) {
        Vec3 hi = p, lo = p;
        double h = g.h(a);
        hi[a] += 0.5 * h;
        lo[a] -= 0.5 * h;
        if (!g.periodic_axis(a)) {
            // keep the sample stencil inside closed domains near walls
            double b0 = g.origin[a], b1 = g.origin[a] + g.length(a);
            if (hi[a] > b1) { hi[a] = b1; }
            if (lo[a] < b0) { lo[a] = b0; }
        }
        double span = hi[a] - lo[a];
        grad[a] = span > 0.0 ? (interpolate_trilinear(f, hi) - interpolate_trilinear(f, lo)) / span
                             : 0.0;
    }
    return grad;
}

inline ElementFrame element_frame(const FrontElement& e, const ScalarField& phi,
                                  double eps_geom) {
    ElementFrame fr;
    Vec3 c = cross(e.v2 - e.v1, e.v3 - e.v1);
    double cn = norm(c);
    fr.area = 0.5 * cn;
    if (fr.area <= eps_geom) throw GeometryError("element_frame: degenerate element");
    fr.normal = c * (1.0 / cn);

    const Vec3 verts[4] = {e.v1, e.v2, e.v3, e.v1};
    for (int k = 0; k < 3; ++k) {
        Vec3 edge = verts[k + 1] - verts[k];
        fr.edge_len[k] = norm(edge);
        fr.tangent[k] = edge * (1.0 / fr.edge_len[k]);
        fr.edge_mid[k] = (verts[k] + verts[k + 1]) * 0.5;

        Vec3 grad = sampled_gradient(phi, phi.grid.wrap(fr.edge_mid[k]));
        Vec3 n_edge;
        if (norm(grad) < 1e-12) {
            n_edge = fr.normal;
            ++fr.phi_fallbacks;
        } else {
            n_edge = normalized(grad);
        }
        fr.binormal_p[k] = normalized(cross(fr.tangent[k], n_edge));
        fr.binormal_pp[k] = normalized(cross(fr.tangent[k], fr.normal));
    }
    return fr;
}

struct AdvectStats {
    double max_speed = 0.0;
    int clamped_vertices = 0;
    int dropped_elements = 0;
};

/// Moves every vertex with the midpoint (RK2) rule on the interpolated grid
/// velocity. prev_area of each element is snapshotted here so the area ratio of
/// the surfactant update cannot be taken across unrelated states. Elements whose
/// area collapses below eps_geom are dropped.
inline AdvectStats advect_front(FrontMesh& mesh, const MacVelocity& vel, double dt,
                                double eps_geom) {
    const GridSpec& g = vel.grid;
    AdvectStats stats;
    const int n = static_cast<int>(mesh.elements.size());
    std::vector<double> speeds(static_cast<size_t>(n), 0.0);
    std::vector<int> clamped(static_cast<size_t>(n), 0);

    auto clamp_point = [&](Vec3& p, int& flag) {
        for (int a = 0; a < 3; ++a) {
            if (g.periodic_axis(a)) continue;
            double lo = g.origin[a], hi = g.origin[a] + g.length(a);
            if (p[a] < lo) { p[a] = lo; flag = 1; }
            if (p[a] > hi) { p[a] = hi; flag = 1; }
        }
    };

    parallel_for(0, n, [&](int idx) {
        FrontElement& e = mesh.elements[static_cast<size_t>(idx)];
        e.prev_area = element_area(e);
        Vec3* verts[3] = {&e.v1, &e.v2, &e.v3};
        double vmax = 0.0;
        int flag = 0;
        for (Vec3* vp : verts) {
            Vec3 u0 = interpolate_trilinear(vel, *vp);
            Vec3 mid = *vp + 0.5 * dt * u0;
            clamp_point(mid, flag);
            Vec3 u1 = interpolate_trilinear(vel, mid);
            *vp += dt * u1;
            clamp_point(*vp, flag);
            vmax = std::max(vmax, std::max(norm(u0), norm(u1)));
        }
        speeds[static_cast<size_t>(idx)] = vmax;
        clamped[static_cast<size_t>(idx)] = flag;
        // keep triangles contiguous across periodic images
        Vec3 cen = element_centroid(e);
        for (int a = 0; a < 3; ++a) {
            if (!g.periodic_axis(a)) continue;
            double lo = g.origin[a], len = g.length(a);
            double shift = std::floor((cen[a] - lo) / len) * len;
            if (shift != 0.0) {
                e.v1[a] -= shift;
                e.v2[a] -= shift;
                e.v3[a] -= shift;
            }
        }
    });

    for (int idx = 0; idx < n; ++idx) {
        stats.max_speed = std::max(stats.max_speed, speeds[static_cast<size_t>(idx)]);
        stats.clamped_vertices += clamped[static_cast<size_t>(idx)];
    }
    if (stats.max_speed * dt > g.min_h() * (1.0 + 1e-12))
        throw CflError("advect_front: interface CFL violated");

    size_t kept = 0;
    for (size_t idx = 0; idx < mesh.elements.size(); ++idx) {
        if (element_area(mesh.elements[idx]) > eps_geom) {
            mesh.elements[kept++] = mesh.elements[idx];
        } else {
            ++stats.dropped_elements;
        }
    }
    mesh.elements.resize(kept);
    return stats;
}

/// A_r = A_e^n / A_e^{n+1} of the surfactant update.
inline double area_ratio(const FrontElement& e, double eps_geom) {
    double a = element_area(e);
    if (a <= eps_geom) throw GeometryError("area_ratio: degenerate element");
    return e.prev_area / a;
}

inline double total_area(const FrontMesh& mesh) {
    return ordered_sum(0, static_cast<int>(mesh.elements.size()), [&](int i) {
        return element_area(mesh.elements[static_cast<size_t>(i)]);
    });
}

/// Total interfacial surfactant mass, sum of gamma * area.
inline double surface_mass(const FrontMesh& mesh) {
    return ordered_sum(0, static_cast<int>(mesh.elements.size()), [&](int i) {
        const FrontElement& e = mesh.elements[static_cast<size_t>(i)];
        return e.gamma * element_area(e);
    });
}

/// Signed volume enclosed by a closed soup with outward winding (divergence
/// theorem over a vertex-centred tet fan).
inline double enclosed_volume(const FrontMesh& mesh) {
    if (mesh.empty()) return 0.0;
    Vec3 c{};
    for (const FrontElement& e : mesh.elements) c += element_centroid(e);
    c *= 1.0 / static_cast<double>(mesh.size());
    return ordered_sum(0, static_cast<int>(mesh.elements.size()), [&](int i) {
        const FrontElement& e = mesh.elements[static_cast<size_t>(i)];
        return dot(e.v1 - c, cross(e.v2 - c, e.v3 - c)) / 6.0;
    });
}

}  // namespace lcrm
