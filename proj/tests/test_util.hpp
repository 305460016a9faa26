#pragma once

#include <cmath>
#include <functional>

#include "lcrm/field.hpp"
#include "lcrm/front.hpp"

namespace lcrm::test {

/// Latitude-longitude triangle soup of a sphere, outward winding.
inline FrontMesh make_sphere_soup(Vec3 center, double radius, int n_theta,
                                  double theta_min = 0.0, double theta_max = M_PI) {
    FrontMesh mesh;
    int n_phi = 2 * n_theta;
    auto at = [&](double th, double ph) -> Vec3 {
        return {center.x + radius * std::sin(th) * std::cos(ph),
                center.y + radius * std::sin(th) * std::sin(ph),
                center.z + radius * std::cos(th)};
    };
    for (int it = 0; it < n_theta; ++it) {
        double t0 = theta_min + (theta_max - theta_min) * it / n_theta;
        double t1 = theta_min + (theta_max - theta_min) * (it + 1) / n_theta;
        for (int ip = 0; ip < n_phi; ++ip) {
            double p0 = 2.0 * M_PI * ip / n_phi;
            double p1 = 2.0 * M_PI * (ip + 1) / n_phi;
            Vec3 a = at(t0, p0), b = at(t1, p0), c = at(t1, p1), d = at(t0, p1);
            // (a,b,c) collapses at the south pole ring, (a,c,d) at the north
            if (std::sin(t1) > 1e-12) mesh.elements.push_back({a, b, c, 0.0, 0.0});
            if (std::sin(t0) > 1e-12) mesh.elements.push_back({a, c, d, 0.0, 0.0});
        }
    }
    for (FrontElement& e : mesh.elements) e.prev_area = element_area(e);
    return mesh;
}

/// Fills a MAC velocity from an analytic field, ghosts included.
inline void fill_velocity(MacVelocity& vel, const std::function<Vec3(Vec3)>& fn) {
    const GridSpec& g = vel.grid;
    for (int c = 0; c < 3; ++c) {
        int ni = g.nx + (c == 0 ? 1 : 0), nj = g.ny + (c == 1 ? 1 : 0),
            nk = g.nz + (c == 2 ? 1 : 0);
        for (int k = -2; k < nk + 2; ++k)
            for (int j = -2; j < nj + 2; ++j)
                for (int i = -2; i < ni + 2; ++i)
                    vel.face(c, i, j, k) = fn(g.face_center(c, i, j, k))[c];
    }
}

/// Fills a cell-centered scalar (interior plus boundary via the field's BCs).
inline void fill_scalar(ScalarField& f, const std::function<double(Vec3)>& fn) {
    const GridSpec& g = f.grid;
    for (int k = -2; k < g.nz + 2; ++k)
        for (int j = -2; j < g.ny + 2; ++j)
            for (int i = -2; i < g.nx + 2; ++i) f(i, j, k) = fn(g.cell_center(i, j, k));
}

inline double signed_sphere_phi(Vec3 p, Vec3 center, double radius) {
    // positive outside (phase 2), negative inside the drop
    return norm(p - center) - radius;
}

}  // namespace lcrm::test
