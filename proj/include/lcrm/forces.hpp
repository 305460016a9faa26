#pragma once

#include <cmath>
#include <vector>

#include "lcrm/distance.hpp"
#include "lcrm/field.hpp"
#include "lcrm/front.hpp"
#include "lcrm/indicator.hpp"
#include "lcrm/peskin.hpp"
#include "lcrm/surfactant_surface.hpp"

namespace lcrm {

enum class EosKind { langmuir, linear };

struct TensionParams {
    double sigma_s = 1.0;  // clean-surface coefficient
    double beta_s = 0.0;   // elasticity number
    EosKind eos_kind = EosKind::linear;
};

constexpr double kSigmaFloorFraction = 0.05;

/// Equation of state sigma(Gamma). Langmuir: sigma_s (1 + beta_s ln(1 - G/Ginf)),
/// linear: sigma_s (1 - beta_s G/Ginf); floored at 0.05 sigma_s (flag reported via
/// `floored`). Langmuir saturation (Gamma >= Gamma_inf) throws.
inline double eos(double gamma, const TensionParams& p, double gamma_inf,
                  bool* floored = nullptr) {
    double sigma;
    if (p.eos_kind == EosKind::langmuir) {
        if (gamma >= gamma_inf)
            throw SaturationError("eos: Gamma at or above maximum packing");
        sigma = p.sigma_s * (1.0 + p.beta_s * std::log(1.0 - gamma / gamma_inf));
    } else {
        sigma = p.sigma_s * (1.0 - p.beta_s * gamma / gamma_inf);
    }
    double floor = kSigmaFloorFraction * p.sigma_s;
    if (sigma < floor) {
        if (floored) *floored = true;
        return floor;
    }
    if (floored) *floored = false;
    return sigma;
}

/// Pointwise sigma(Gamma(x)) over the band of an Eulerian surfactant field.
/// Saturated cells take the floor value instead of throwing (field building must
/// not abort on a kernel-averaged overshoot); the count is reported.
inline ScalarField sigma_field_from_gamma(const SurfField& gamma, const TensionParams& p,
                                          double gamma_inf, int* floored_cells = nullptr) {
    const GridSpec& g = gamma.gamma.grid;
    ScalarField out(g, p.sigma_s);
    std::vector<int> counts(static_cast<size_t>(g.nz), 0);
    parallel_for(0, g.nz, [&](int k) {
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                if (!gamma.band(i, j, k)) continue;
                double gv = std::max(gamma.gamma(i, j, k), 0.0);
                double sigma;
                if (p.eos_kind == EosKind::langmuir && gv >= gamma_inf) {
                    sigma = kSigmaFloorFraction * p.sigma_s;
                    ++counts[static_cast<size_t>(k)];
                } else {
                    bool fl = false;
                    sigma = eos(gv, p, gamma_inf, &fl);
                    if (fl) ++counts[static_cast<size_t>(k)];
                }
                out(i, j, k) = sigma;
            }
    });
    if (floored_cells) {
        *floored_cells = 0;
        for (int c : counts) *floored_cells += c;
    }
    apply_boundary(out);
    return out;
}

/// Force fields of one step: the Lagrangian pull and normal distributions, the
/// hybrid sigma*kappa field, and the face-centered normal/Marangoni forces.
struct ForceFields {
    ScalarField fl_x, fl_y, fl_z;  // distributed edge pulls (force density)
    ScalarField g_x, g_y, g_z;     // distributed element normals (area density)
    ScalarField sigma_kappa;       // F_L . G / G . G, zero where |G|^2 is tiny
    MacVelocity f_n;               // sigma kappa grad(I) on faces
    MacVelocity f_s;               // Marangoni force on faces

    explicit ForceFields(const GridSpec& g)
        : fl_x(g), fl_y(g), fl_z(g), g_x(g), g_y(g), g_z(g), sigma_kappa(g), f_n(g),
          f_s(g) {}
};

/// Hybrid normal surface tension: per element, the three edge pulls
/// sigma(Gamma_f) (t_k x n_f) ds_k are distributed at the edge midpoints (F_L) and
/// the element normal at its centroid (G); sigma kappa_H = F_L.G/(G.G) wherever
/// the normal distribution is significant, and F_n = sigma kappa_H grad I on the
/// velocity faces. With phi > 0 in phase 2 and a phase-1 drop, sigma kappa_H is
/// negative and F_n points toward the drop centre.
inline void normal_force(const FrontMesh& mesh, const std::vector<ElementFrame>& frames,
                         const IndicatorField& ind, const std::vector<double>& sigma_elem,
                         ForceFields& ff) {
    const GridSpec& g = ind.ind.grid;
    ff.fl_x.fill(0.0);
    ff.fl_y.fill(0.0);
    ff.fl_z.fill(0.0);
    ff.g_x.fill(0.0);
    ff.g_y.fill(0.0);
    ff.g_z.fill(0.0);

    for (size_t n = 0; n < mesh.size(); ++n) {
        const ElementFrame& fr = frames[n];
        double sigma = sigma_elem[n];
        for (int k = 0; k < 3; ++k) {
            // inward conormal n_f x t: paired edge pulls of neighboring elements
            // assemble the inward-pointing curvature force density
            Vec3 pull = cross(fr.normal, fr.tangent[k]) * (sigma * fr.edge_len[k]);
            scatter_to_cells(ff.fl_x, fr.edge_mid[k], pull.x);
            scatter_to_cells(ff.fl_y, fr.edge_mid[k], pull.y);
            scatter_to_cells(ff.fl_z, fr.edge_mid[k], pull.z);
            // normal distribution co-located with the pulls (one third of the
            // element area per edge) keeps the ratio field smooth
            Vec3 gn = fr.normal * (fr.area / 3.0);
            scatter_to_cells(ff.g_x, fr.edge_mid[k], gn.x);
            scatter_to_cells(ff.g_y, fr.edge_mid[k], gn.y);
            scatter_to_cells(ff.g_z, fr.edge_mid[k], gn.z);
        }
    }

    double g2max = ordered_max(0, g.nz, [&](int k) {
        double m = 0.0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                double g2 = ff.g_x(i, j, k) * ff.g_x(i, j, k) +
                            ff.g_y(i, j, k) * ff.g_y(i, j, k) +
                            ff.g_z(i, j, k) * ff.g_z(i, j, k);
                m = std::max(m, g2);
            }
        return m;
    });
    const double eps_g = 1e-6 * g2max;

    for_cells(g, [&](int i, int j, int k) {
        double g2 = ff.g_x(i, j, k) * ff.g_x(i, j, k) + ff.g_y(i, j, k) * ff.g_y(i, j, k) +
                    ff.g_z(i, j, k) * ff.g_z(i, j, k);
        if (g2 <= eps_g || g2 == 0.0) {
            ff.sigma_kappa(i, j, k) = 0.0;
            return;
        }
        double fg = ff.fl_x(i, j, k) * ff.g_x(i, j, k) + ff.fl_y(i, j, k) * ff.g_y(i, j, k) +
                    ff.fl_z(i, j, k) * ff.g_z(i, j, k);
        ff.sigma_kappa(i, j, k) = fg / g2;
    });
    apply_boundary(ff.sigma_kappa);

    const ScalarField& I = ind.ind;
    const ScalarField& sk = ff.sigma_kappa;
    parallel_for(0, g.nz, [&](int k) {
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i <= g.nx; ++i)
                ff.f_n.fu(i, j, k) = 0.5 * (sk(i - 1, j, k) + sk(i, j, k)) *
                                     (I(i, j, k) - I(i - 1, j, k)) / g.hx;
    });
    parallel_for(0, g.nz, [&](int k) {
        for (int j = 0; j <= g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                ff.f_n.fv(i, j, k) = 0.5 * (sk(i, j - 1, k) + sk(i, j, k)) *
                                     (I(i, j, k) - I(i, j - 1, k)) / g.hy;
    });
    parallel_for(0, g.nz + 1, [&](int k) {
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                ff.f_n.fw(i, j, k) = 0.5 * (sk(i, j, k - 1) + sk(i, j, k)) *
                                     (I(i, j, k) - I(i, j, k - 1)) / g.hz;
    });
}

/// Marangoni (tangential) force: per edge midpoint, the probed surface gradient of
/// sigma decomposed along p and t, weighted by one third of the element area and
/// distributed onto the staggered faces.
inline void marangoni_force(const FrontMesh& mesh, const std::vector<ElementFrame>& frames,
                            const ScalarField& sigma_field, const CellMask& band,
                            const ScalarField& phi, double probe_dl, ForceFields& ff,
                            int* probe_fallbacks = nullptr) {
    const size_t n = mesh.size();
    struct EdgeForce {
        Vec3 pos, f;
    };
    std::vector<EdgeForce> contrib(3 * n);
    std::vector<int> fb(std::max<size_t>(n, 1), 0);
    parallel_for(0, static_cast<int>(n), [&](int e) {
        const ElementFrame& fr = frames[static_cast<size_t>(e)];
        for (int k = 0; k < 3; ++k) {
            ProbeResult gp =
                probe_gradient(fr.edge_mid[k], fr.binormal_p[k], probe_dl, sigma_field,
                               band, phi);
            ProbeResult gt =
                probe_gradient(fr.edge_mid[k], fr.tangent[k], probe_dl, sigma_field, band,
                               phi);
            fb[static_cast<size_t>(e)] += gp.fallback + gt.fallback;
            Vec3 f = (gp.grad * fr.binormal_p[k] + gt.grad * fr.tangent[k]) *
                     (fr.area / 3.0);
            contrib[static_cast<size_t>(3 * e + k)] = {fr.edge_mid[k], f};
        }
    });
    ff.f_s.u.fill(0.0);
    ff.f_s.v.fill(0.0);
    ff.f_s.w.fill(0.0);
    for (const EdgeForce& c : contrib) scatter_to_faces(ff.f_s, c.pos, c.f);
    if (probe_fallbacks) {
        *probe_fallbacks = 0;
        for (int v : fb) *probe_fallbacks += v;
    }
}

}  // namespace lcrm
