#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "lcrm/distance.hpp"
#include "lcrm/field.hpp"
#include "lcrm/front.hpp"
#include "lcrm/peskin.hpp"

namespace lcrm {

namespace detail {

/// Kuhn subdivision of a cube into 6 tetrahedra. Corners are bitmasks
/// (bit0 = +x, bit1 = +y, bit2 = +z); every tet shares the main diagonal 0-7 and
/// the face diagonals are translation-invariant, so adjacent cells conform.
inline const std::array<std::array<int, 4>, 6>& kuhn_tets() {
    static const std::array<std::array<int, 4>, 6> tets = [] {
        std::array<std::array<int, 4>, 6> t{};
        const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                 {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        for (int p = 0; p < 6; ++p) {
            int m = 0;
            t[p][0] = 0;
            m |= 1 << perms[p][0];
            t[p][1] = m;
            m |= 1 << perms[p][1];
            t[p][2] = m;
            t[p][3] = 7;
        }
        return t;
    }();
    return tets;
}

/// Marches the iso contour phi = iso on the Kuhn tetrahedra of the cell-center
/// lattice. Vertices come from linear interpolation along tet edges, evaluated in
/// a canonical endpoint order so shared edges match bitwise.
inline FrontMesh march_contour(const ScalarField& phi, double iso, size_t* dropped_out) {
    const GridSpec& g = phi.grid;
    const double eps_geom = geometry_epsilon(g.min_h());
    const double tie_break = 1e-12 * g.min_h();

    // dual cells span adjacent cell centers; the high edge wraps on periodic axes
    const int mx = g.periodic_axis(0) ? g.nx : g.nx - 1;
    const int my = g.periodic_axis(1) ? g.ny : g.ny - 1;
    const int mz = g.periodic_axis(2) ? g.nz : g.nz - 1;

    auto corner_value = [&](int i, int j, int k) -> double {
        double v = phi(i, j, k) - iso;  // ghost reads cover the periodic wrap
        return v == 0.0 ? tie_break : v;
    };

    std::vector<std::vector<FrontElement>> slabs(static_cast<size_t>(mz));
    std::vector<size_t> dropped(static_cast<size_t>(mz), 0);

    parallel_for(0, mz, [&](int k) {
        std::vector<FrontElement>& outv = slabs[static_cast<size_t>(k)];
        for (int j = 0; j < my; ++j) {
            for (int i = 0; i < mx; ++i) {
                double cv[8];
                Vec3 cpos[8];
                int64_t cid[8];
                bool any_neg = false, any_pos = false;
                for (int m = 0; m < 8; ++m) {
                    int di = m & 1, dj = (m >> 1) & 1, dk = (m >> 2) & 1;
                    cv[m] = corner_value(i + di, j + dj, k + dk);
                    cpos[m] = g.cell_center(i + di, j + dj, k + dk);
                    cid[m] = (static_cast<int64_t>(k + dk) * (g.ny + 1) + (j + dj)) *
                                 (g.nx + 1) +
                             (i + di);
                    (cv[m] > 0.0 ? any_pos : any_neg) = true;
                }
                if (!any_neg || !any_pos) continue;

                for (const auto& tet : kuhn_tets()) {
                    int pos[4], neg[4];
                    int npos = 0, nneg = 0;
                    for (int m = 0; m < 4; ++m) {
                        if (cv[tet[m]] > 0.0)
                            pos[npos++] = tet[m];
                        else
                            neg[nneg++] = tet[m];
                    }
                    if (npos == 0 || nneg == 0) continue;

                    auto crossing = [&](int a, int b) -> Vec3 {
                        if (cid[a] > cid[b]) std::swap(a, b);
                        double fa = cv[a], fb = cv[b];
                        double t = fa / (fa - fb);
                        return cpos[a] + t * (cpos[b] - cpos[a]);
                    };

                    Vec3 dir{};  // negative-side centroid -> positive-side centroid
                    {
                        Vec3 cp{}, cn{};
                        for (int m = 0; m < npos; ++m) cp += cpos[pos[m]];
                        for (int m = 0; m < nneg; ++m) cn += cpos[neg[m]];
                        dir = cp * (1.0 / npos) - cn * (1.0 / nneg);
                    }
                    auto emit = [&](Vec3 a, Vec3 b, Vec3 c) {
                        Vec3 n = cross(b - a, c - a);
                        if (dot(n, dir) < 0.0) std::swap(b, c);
                        FrontElement e{a, b, c, 0.0, 0.0};
                        double area = element_area(e);
                        if (area <= eps_geom) {
                            ++dropped[static_cast<size_t>(k)];
                            return;
                        }
                        e.prev_area = area;
                        outv.push_back(e);
                    };

                    if (npos == 1) {
                        emit(crossing(pos[0], neg[0]), crossing(pos[0], neg[1]),
                             crossing(pos[0], neg[2]));
                    } else if (nneg == 1) {
                        emit(crossing(neg[0], pos[0]), crossing(neg[0], pos[1]),
                             crossing(neg[0], pos[2]));
                    } else {  // 2/2: quad split into two triangles
                        Vec3 e11 = crossing(pos[0], neg[0]);
                        Vec3 e12 = crossing(pos[0], neg[1]);
                        Vec3 e22 = crossing(pos[1], neg[1]);
                        Vec3 e21 = crossing(pos[1], neg[0]);
                        emit(e11, e12, e22);
                        emit(e11, e22, e21);
                    }
                }
            }
        }
    });

    FrontMesh mesh;
    size_t total = 0, ndrop = 0;
    for (auto& s : slabs) total += s.size();
    for (auto d : dropped) ndrop += d;
    mesh.elements.reserve(total);
    for (auto& s : slabs) mesh.elements.insert(mesh.elements.end(), s.begin(), s.end());
    if (dropped_out) *dropped_out = ndrop;
    return mesh;
}

}  // namespace detail

struct ReconstructStats {
    size_t elements = 0;
    size_t dropped_degenerate = 0;
    double mass_scale = 1.0;
    double iso_offset = 0.0;
};

/// Rebuilds the triangle soup as the zero contour of phi, marched on tetrahedra of
/// the cell-center lattice with linear vertex placement along tet edges.
///
/// When old_volume is given, the contour level is offset once (|offset| <= h/4) so
/// the enclosed volume matches it; this cancels the systematic O(h^2/R) shrink of
/// linear placement on a curved distance field, which otherwise compounds across
/// repeated reconstructions.
///
/// New element gamma values are sampled from the Eulerian surface-surfactant field
/// (when given) and rescaled so the total surface mass equals old_mass exactly.
inline FrontMesh reconstruct(const DistanceField& dist, const SurfField* gamma,
                             double old_mass, std::optional<double> old_volume = {},
                             ReconstructStats* stats = nullptr) {
    const GridSpec& g = dist.phi.grid;
    size_t dropped = 0;
    FrontMesh mesh = detail::march_contour(dist.phi, 0.0, &dropped);
    double iso = 0.0;

    if (old_volume && !mesh.empty()) {
        double v_new = enclosed_volume(mesh);
        double area = total_area(mesh);
        if (area > 0.0) {
            // phi > 0 outside, so a positive iso level moves the surface outward
            iso = (*old_volume - v_new) / area;
            double cap = 0.25 * g.min_h();
            iso = std::clamp(iso, -cap, cap);
            if (iso != 0.0) {
                size_t dropped2 = 0;
                FrontMesh corrected = detail::march_contour(dist.phi, iso, &dropped2);
                if (!corrected.empty()) {
                    mesh = std::move(corrected);
                    dropped = dropped2;
                }
            }
        }
    }

    // re-seed gamma from the Eulerian field, then rescale to conserve mass exactly
    double scale = 1.0;
    if (gamma != nullptr) {
        for (FrontElement& e : mesh.elements) {
            auto v = sample_masked(gamma->gamma, gamma->band, element_centroid(e));
            e.gamma = v.value_or(0.0);
        }
        double new_mass = surface_mass(mesh);
        if (new_mass > 0.0) {
            scale = old_mass / new_mass;
            for (FrontElement& e : mesh.elements) e.gamma *= scale;
        } else if (old_mass != 0.0 && !mesh.empty()) {
            double area = total_area(mesh);
            for (FrontElement& e : mesh.elements) e.gamma = old_mass / area;
        }
    }

    if (stats) {
        stats->elements = mesh.elements.size();
        stats->dropped_degenerate = dropped;
        stats->mass_scale = scale;
        stats->iso_offset = iso;
    }
    return mesh;
}

}  // namespace lcrm
