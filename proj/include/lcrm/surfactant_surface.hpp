#pragma once

#include <cmath>

#include "lcrm/field.hpp"
#include "lcrm/front.hpp"
#include "lcrm/peskin.hpp"

namespace lcrm {

struct SurfactantParams {
    double d_s = 0.0;        // surface diffusivity
    double gamma_inf = 1.0;  // maximum packing concentration
    double k_a = 0.0;        // adsorption coefficient
    double k_d = 0.0;        // desorption coefficient
};

/// Source model: the full adsorption/desorption balance, or the adsorption-only
/// reduction used by the clean-drop uptake benchmark.
enum class SourceModel { full, adsorption_only };

/// One Newton step along grad(phi) so the point sits where phi ~ 0. Points outside
/// a closed domain are returned unchanged (the caller's masked sample rejects them).
inline Vec3 snap_to_interface(const Vec3& p, const ScalarField& phi) {
    Vec3 q = phi.grid.wrap(p);
    if (!phi.grid.contains(q)) return q;
    double val = interpolate_trilinear(phi, q);
    Vec3 grad = sampled_gradient(phi, q);
    double g2 = norm2(grad);
    if (g2 < 1e-24) return q;
    Vec3 snapped = phi.grid.wrap(q - grad * (val / g2));
    return phi.grid.contains(snapped) ? snapped : q;
}

struct ProbeResult {
    double grad = 0.0;
    bool fallback = false;  // probe left the gamma band; one-sided value used
};

/// Surface gradient of the band field along `dir` at an interface point:
/// (value(x + dl dir) - value(x - dl dir)) / 2dl with both samples snapped onto
/// the phi = 0 surface. Falls back to a one-sided difference when a probe exits
/// the kernel band.
inline ProbeResult probe_gradient(const Vec3& x, const Vec3& dir, double dl,
                                  const ScalarField& field, const CellMask& band,
                                  const ScalarField& phi) {
    Vec3 p_out = snap_to_interface(x + dl * dir, phi);
    Vec3 p_in = snap_to_interface(x - dl * dir, phi);
    auto v_out = sample_masked(field, band, p_out);
    auto v_in = sample_masked(field, band, p_in);
    if (v_out && v_in) return {(*v_out - *v_in) / (2.0 * dl), false};

    auto v_mid = sample_masked(field, band, phi.grid.wrap(x));
    if (v_out && v_mid) return {(*v_out - *v_mid) / dl, true};
    if (v_in && v_mid) return {(*v_mid - *v_in) / dl, true};
    return {0.0, true};
}

/// p-direction surface gradient at edge k of an element (feeds diffusion and the
/// normal part of the Marangoni machinery).
inline ProbeResult probe_gradient_p(const ElementFrame& fr, int edge, double dl,
                                    const SurfField& gamma, const ScalarField& phi) {
    return probe_gradient(fr.edge_mid[edge], fr.binormal_p[edge], dl, gamma.gamma,
                          gamma.band, phi);
}

/// t-direction surface gradient at edge k of an element.
inline ProbeResult probe_gradient_t(const ElementFrame& fr, int edge, double dl,
                                    const SurfField& gamma, const ScalarField& phi) {
    return probe_gradient(fr.edge_mid[edge], fr.tangent[edge], dl, gamma.gamma,
                          gamma.band, phi);
}

/// Line-integral diffusion increment for one element: D_s * sum_k grad_p,k ds_k.
/// Units are surfactant mass per time; divide by the element area in the update.
inline double diffusion_term(const ElementFrame& fr, const double grad_p[3], double d_s) {
    return d_s * (grad_p[0] * fr.edge_len[0] + grad_p[1] * fr.edge_len[1] +
                  grad_p[2] * fr.edge_len[2]);
}

/// Adsorption/desorption source: k_a C_s (Gamma_inf - Gamma) - k_d Gamma, or the
/// adsorption-only reduction k_a C_s.
inline double source_term(double gamma, double c_s, const SurfactantParams& p,
                          SourceModel model = SourceModel::full) {
    if (model == SourceModel::adsorption_only) return p.k_a * c_s;
    return p.k_a * c_s * (p.gamma_inf - gamma) - p.k_d * gamma;
}

struct GammaUpdate {
    double gamma = 0.0;
    double clamped_mass = 0.0;  // mass removed (+) or added (-) by the clamp
};

/// Gamma update from stretching, diffusion, and source:
///   Gamma^{n+1} = Gamma^n A_r + dt (dGamma_D / A^{n+1} + S)
/// clamped to [0, Gamma_inf]; the clamped mass is reported for diagnostics.
inline GammaUpdate update_gamma(const FrontElement& e, double a_r, double dgamma_d,
                                double source, double dt, const SurfactantParams& p,
                                double h) {
    if (p.d_s > 0.0 && dt > 0.25 * h * h / p.d_s * (1.0 + 1e-12))
        throw StabilityError("update_gamma: dt exceeds 0.25 h^2 / D_s");
    double area = element_area(e);
    double raw = e.gamma * a_r + dt * (dgamma_d / area + source);
    double clamped = std::min(std::max(raw, 0.0), p.gamma_inf);
    return {clamped, (raw - clamped) * area};
}

}  // namespace lcrm
