#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <vector>

#include "lcrm/error.hpp"
#include "lcrm/field.hpp"
#include "lcrm/front.hpp"

namespace lcrm {

/// Closest point on triangle (a,b,c) to p (Ericson, Real-Time Collision Detection).
inline Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b,
                                      const Vec3& c) {
    Vec3 ab = b - a, ac = c - a, ap = p - a;
    double d1 = dot(ab, ap), d2 = dot(ac, ap);
    if (d1 <= 0.0 && d2 <= 0.0) return a;

    Vec3 bp = p - b;
    double d3 = dot(ab, bp), d4 = dot(ac, bp);
    if (d3 >= 0.0 && d4 <= d3) return b;

    double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
        double v = d1 / (d1 - d3);
        return a + v * ab;
    }

    Vec3 cp = p - c;
    double d5 = dot(ab, cp), d6 = dot(ac, cp);
    if (d6 >= 0.0 && d5 <= d6) return c;

    double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
        double w = d2 / (d2 - d6);
        return a + w * ac;
    }

    double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return b + w * (c - b);
    }

    double denom = 1.0 / (va + vb + vc);
    double v = vb * denom, w = vc * denom;
    return a + v * ab + w * ac;
}

/// Signed distance to the front: exact point-to-triangle distance within a band of
/// `band_cells` cells around every element (sign from the nearest element normal,
/// positive in phase 2), extended outward by closest-element propagation sweeps.
/// nearest_elem records the closest element for each band cell.
struct DistanceField {
    ScalarField phi;
    int band_cells = 4;
    CellMask in_band;
    std::vector<int32_t> nearest_elem;

    int32_t nearest(int i, int j, int k) const {
        return nearest_elem[in_band.idx(i, j, k)];
    }
};

inline DistanceField build_distance(const FrontMesh& mesh, const GridSpec& grid,
                                    int band_cells = 4) {
    if (mesh.empty()) throw GeometryError("build_distance: empty mesh");
    const int nx = grid.nx, ny = grid.ny, nz = grid.nz;
    const size_t ncell = static_cast<size_t>(nx) * ny * nz;
    const double big = std::numeric_limits<double>::max();
    const double eps = geometry_epsilon(grid.min_h());

    struct BandGrid {
        std::vector<double> d2;
        std::vector<int32_t> elem;
        std::vector<int8_t> sign;
    };
    const int nw = std::min(worker_count(), std::max(1, static_cast<int>(mesh.size())));
    std::vector<BandGrid> partial(static_cast<size_t>(nw));
    for (auto& p : partial) {
        p.d2.assign(ncell, big);
        p.elem.assign(ncell, -1);
        p.sign.assign(ncell, 0);
    }

    const int ne = static_cast<int>(mesh.size());
    parallel_for(0, nw, [&](int w) {
        BandGrid& bg = partial[static_cast<size_t>(w)];
        int lo = static_cast<int>(static_cast<int64_t>(ne) * w / nw);
        int hi = static_cast<int>(static_cast<int64_t>(ne) * (w + 1) / nw);
        for (int id = lo; id < hi; ++id) {
            const FrontElement& e = mesh.elements[static_cast<size_t>(id)];
            if (element_area(e) <= eps) continue;
            Vec3 n_f = element_normal(e, eps);
            Vec3 bmin = e.v1, bmax = e.v1;
            for (const Vec3& v : {e.v2, e.v3})
                for (int a = 0; a < 3; ++a) {
                    bmin[a] = std::min(bmin[a], v[a]);
                    bmax[a] = std::max(bmax[a], v[a]);
                }
            int i0[3], i1[3];
            for (int a = 0; a < 3; ++a) {
                double h = grid.h(a);
                i0[a] = static_cast<int>(std::floor((bmin[a] - grid.origin[a]) / h - 0.5)) -
                        band_cells;
                i1[a] = static_cast<int>(std::ceil((bmax[a] - grid.origin[a]) / h - 0.5)) +
                        band_cells;
                if (!grid.periodic_axis(a)) {
                    i0[a] = std::max(i0[a], 0);
                    i1[a] = std::min(i1[a], grid.n(a) - 1);
                }
            }
            for (int k = i0[2]; k <= i1[2]; ++k)
                for (int j = i0[1]; j <= i1[1]; ++j)
                    for (int i = i0[0]; i <= i1[0]; ++i) {
                        Vec3 cc{grid.origin.x + (i + 0.5) * grid.hx,
                                grid.origin.y + (j + 0.5) * grid.hy,
                                grid.origin.z + (k + 0.5) * grid.hz};
                        int iw = grid.periodic_axis(0) ? ((i % nx) + nx) % nx : i;
                        int jw = grid.periodic_axis(1) ? ((j % ny) + ny) % ny : j;
                        int kw = grid.periodic_axis(2) ? ((k % nz) + nz) % nz : k;
                        size_t idx = (static_cast<size_t>(kw) * ny + jw) * nx + iw;
                        // squared distance to the triangle AABB rejects most cells
                        double lb2 = 0.0;
                        for (int a = 0; a < 3; ++a) {
                            double d = std::max({bmin[a] - cc[a], 0.0, cc[a] - bmax[a]});
                            lb2 += d * d;
                        }
                        if (lb2 > bg.d2[idx]) continue;
                        Vec3 cp = closest_point_on_triangle(cc, e.v1, e.v2, e.v3);
                        double d2 = norm2(cc - cp);
                        if (d2 < bg.d2[idx] || (d2 == bg.d2[idx] && id < bg.elem[idx])) {
                            bg.d2[idx] = d2;
                            bg.elem[idx] = id;
                            bg.sign[idx] = dot(cc - cp, n_f) >= 0.0 ? 1 : -1;
                        }
                    }
        }
    });

    // merge worker bands in fixed order
    BandGrid& acc = partial[0];
    for (int w = 1; w < nw; ++w) {
        BandGrid& bg = partial[static_cast<size_t>(w)];
        parallel_for(0, static_cast<int>(ncell), [&](int c) {
            size_t idx = static_cast<size_t>(c);
            if (bg.d2[idx] < acc.d2[idx] ||
                (bg.d2[idx] == acc.d2[idx] && bg.elem[idx] >= 0 &&
                 bg.elem[idx] < acc.elem[idx])) {
                acc.d2[idx] = bg.d2[idx];
                acc.elem[idx] = bg.elem[idx];
                acc.sign[idx] = bg.sign[idx];
            }
        });
    }

    DistanceField out{ScalarField(grid), band_cells, CellMask(grid),
                      std::vector<int32_t>(ncell, -1)};
    std::vector<double> dist(ncell, big);
    // Only cells within band_cells*h of the soup are guaranteed to have seen their
    // true nearest element; farther hits are fringe overestimates, so they are
    // re-derived by the propagation sweeps below.
    const double exact_radius = band_cells * grid.min_h();
    for (size_t c = 0; c < ncell; ++c) {
        if (acc.elem[c] >= 0) {
            double d = std::sqrt(acc.d2[c]);
            if (d <= exact_radius) {
                dist[c] = d;
                out.in_band.valid[c] = 1;
                out.nearest_elem[c] = acc.elem[c];
            } else {
                acc.elem[c] = -1;
                acc.sign[c] = 0;
            }
        }
    }

    // Closest-element propagation: far cells adopt a neighbor's nearest element and
    // re-evaluate the exact point-to-triangle distance to it. The 26-neighbor pull
    // keeps diagonal chains alive near medial points; dirty flags and a
    // triangle-inequality bound keep the exact evaluations O(1) per cell.
    std::vector<int32_t> prop_elem(ncell, -1);
    for (size_t c = 0; c < ncell; ++c) prop_elem[c] = out.nearest_elem[c];
    auto didx = [&](int i, int j, int k) { return (static_cast<size_t>(k) * ny + j) * nx + i; };
    struct Step { int d[3]; double len; };
    std::vector<Step> steps;
    for (int dk = -1; dk <= 1; ++dk)
        for (int dj = -1; dj <= 1; ++dj)
            for (int di = -1; di <= 1; ++di) {
                if (di == 0 && dj == 0 && dk == 0) continue;
                double len = std::sqrt(di * di * grid.hx * grid.hx +
                                       dj * dj * grid.hy * grid.hy +
                                       dk * dk * grid.hz * grid.hz);
                steps.push_back({{di, dj, dk}, len});
            }
    std::vector<uint8_t> dirty(ncell, 1);
    for (int pass = 0; pass < 6; ++pass) {
        bool changed = false;
        for (int sweep = 0; sweep < 8; ++sweep) {
            int si = (sweep & 1) ? -1 : 1;
            int sj = (sweep & 2) ? -1 : 1;
            int sk = (sweep & 4) ? -1 : 1;
            for (int kk = 0; kk < nz; ++kk) {
                int k = sk > 0 ? kk : nz - 1 - kk;
                for (int jj = 0; jj < ny; ++jj) {
                    int j = sj > 0 ? jj : ny - 1 - jj;
                    for (int ii = 0; ii < nx; ++ii) {
                        int i = si > 0 ? ii : nx - 1 - ii;
                        size_t c = didx(i, j, k);
                        if (out.in_band.valid[c] || !dirty[c]) continue;
                        dirty[c] = 0;
                        Vec3 cc{grid.origin.x + (i + 0.5) * grid.hx,
                                grid.origin.y + (j + 0.5) * grid.hy,
                                grid.origin.z + (k + 0.5) * grid.hz};
                        bool adopted = false;
                        for (const Step& st : steps) {
                            int t[3] = {i + st.d[0], j + st.d[1], k + st.d[2]};
                            Vec3 shift{};
                            bool ok = true;
                            for (int a = 0; a < 3; ++a) {
                                if (t[a] < 0 || t[a] >= grid.n(a)) {
                                    if (!grid.periodic_axis(a)) { ok = false; break; }
                                    int raw = t[a];
                                    t[a] = (t[a] + grid.n(a)) % grid.n(a);
                                    shift[a] = (raw - t[a]) * grid.h(a);
                                }
                            }
                            if (!ok) continue;
                            size_t nc = didx(t[0], t[1], t[2]);
                            int32_t id = prop_elem[nc];
                            if (id < 0 || id == prop_elem[c]) continue;
                            if (dist[nc] == big || dist[nc] - st.len >= dist[c]) continue;
                            Vec3 q = cc - shift;  // query in the neighbor's frame
                            const FrontElement& e = mesh.elements[static_cast<size_t>(id)];
                            Vec3 cp = closest_point_on_triangle(q, e.v1, e.v2, e.v3);
                            double d = norm(q - cp);
                            if (d < dist[c]) {
                                dist[c] = d;
                                prop_elem[c] = id;
                                adopted = true;
                            }
                        }
                        if (adopted) {
                            changed = true;
                            for (const Step& st : steps) {
                                int t[3] = {i + st.d[0], j + st.d[1], k + st.d[2]};
                                bool ok = true;
                                for (int a = 0; a < 3; ++a) {
                                    if (t[a] < 0 || t[a] >= grid.n(a)) {
                                        if (!grid.periodic_axis(a)) { ok = false; break; }
                                        t[a] = (t[a] + grid.n(a)) % grid.n(a);
                                    }
                                }
                                if (ok) dirty[didx(t[0], t[1], t[2])] = 1;
                            }
                        }
                    }
                }
            }
        }
        if (!changed) break;
    }

    // propagate the phase sign outward from the band (the interface never crosses
    // the far field, so each connected far region carries one sign)
    std::deque<std::array<int, 3>> queue;
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i)
                if (acc.sign[didx(i, j, k)] != 0) queue.push_back({i, j, k});
    while (!queue.empty()) {
        auto [i, j, k] = queue.front();
        queue.pop_front();
        int8_t s = acc.sign[didx(i, j, k)];
        for (int axis = 0; axis < 3; ++axis)
            for (int dir = -1; dir <= 1; dir += 2) {
                int t[3] = {i, j, k};
                t[axis] += dir;
                if (t[axis] < 0 || t[axis] >= grid.n(axis)) {
                    if (!grid.periodic_axis(axis)) continue;
                    t[axis] = (t[axis] + grid.n(axis)) % grid.n(axis);
                }
                size_t c = didx(t[0], t[1], t[2]);
                if (acc.sign[c] == 0) {
                    acc.sign[c] = s;
                    queue.push_back({t[0], t[1], t[2]});
                }
            }
    }

    for_cells(grid, [&](int i, int j, int k) {
        size_t c = didx(i, j, k);
        double d = dist[c] == big ? band_cells * grid.min_h() : dist[c];
        out.phi(i, j, k) = (acc.sign[c] >= 0 ? 1.0 : -1.0) * d;
    });
    apply_boundary(out.phi);
    return out;
}

}  // namespace lcrm
