#pragma once

#include <cmath>

#include "lcrm/distance.hpp"
#include "lcrm/field.hpp"

namespace lcrm {

/// Smoothed Heaviside of the signed distance, half-width 1.5h (cosine profile):
/// 0 deep in phase 1, 1 deep in phase 2, 0.5 on the interface.
struct IndicatorField {
    ScalarField ind;
};

inline double smoothed_heaviside(double phi, double half_width) {
    if (phi <= -half_width) return 0.0;
    if (phi >= half_width) return 1.0;
    double r = phi / half_width;
    return 0.5 * (1.0 + r + std::sin(M_PI * r) / M_PI);
}

inline IndicatorField build_indicator(const DistanceField& dist) {
    const GridSpec& g = dist.phi.grid;
    IndicatorField out{ScalarField(g)};
    const double w = 1.5 * g.min_h();
    for_cells(g, [&](int i, int j, int k) {
        out.ind(i, j, k) = smoothed_heaviside(dist.phi(i, j, k), w);
    });
    apply_boundary(out.ind);
    return out;
}

/// rho = rho1 + (rho2 - rho1) I, and likewise for viscosity.
inline ScalarField mix_property(const IndicatorField& ind, double v1, double v2) {
    const GridSpec& g = ind.ind.grid;
    ScalarField out(g);
    for_cells(g, [&](int i, int j, int k) {
        out(i, j, k) = v1 + (v2 - v1) * ind.ind(i, j, k);
    });
    apply_boundary(out);
    return out;
}

}  // namespace lcrm
