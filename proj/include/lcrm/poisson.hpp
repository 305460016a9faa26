#pragma once

#include <cmath>
#include <sstream>
#include <vector>

#include "lcrm/error.hpp"
#include "lcrm/field.hpp"

namespace lcrm {

struct PoissonSettings {
    double tolerance = 1e-8;  // relative l2 residual
    int max_iterations = 200;
    int smoother_sweeps = 2;

    void validate() const {
        if (!(tolerance > 0.0 && tolerance <= 1e-4))
            throw ConfigError("poisson: tolerance must lie in (0, 1e-4]");
    }
};

namespace mg {

/// One multigrid level of the variable-coefficient operator div(beta grad p).
/// Raw arrays without ghosts; closed boundaries carry beta = 0 faces.
struct Level {
    int nx, ny, nz;
    double hx, hy, hz;
    std::array<bool, 3> periodic;
    Array3 bx, by, bz;  // face coefficients: (nx+1,ny,nz), (nx,ny+1,nz), (nx,ny,nz+1)
    Array3 p, r, tmp;

    Level(int nx_, int ny_, int nz_, double hx_, double hy_, double hz_,
          std::array<bool, 3> per)
        : nx(nx_), ny(ny_), nz(nz_), hx(hx_), hy(hy_), hz(hz_), periodic(per),
          bx(nx_ + 1, ny_, nz_), by(nx_, ny_ + 1, nz_), bz(nx_, ny_, nz_ + 1),
          p(nx_, ny_, nz_), r(nx_, ny_, nz_), tmp(nx_, ny_, nz_) {}

    int wrap(int q, int n, bool per) const {
        if (per) return q < 0 ? q + n : (q >= n ? q - n : q);
        return q < 0 ? 0 : (q >= n ? n - 1 : q);  // wall faces carry beta = 0
    }

    double pval(const Array3& f, int i, int j, int k) const {
        i = wrap(i, nx, periodic[0]);
        j = wrap(j, ny, periodic[1]);
        k = wrap(k, nz, periodic[2]);
        return f(i, j, k);
    }

    // residual r = rhs - A p
    void residual(const Array3& rhs) {
        double ax = 1.0 / (hx * hx), ay = 1.0 / (hy * hy), az = 1.0 / (hz * hz);
        parallel_for(0, nz, [&](int k) {
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i) {
                    double pc = p(i, j, k);
                    double flux =
                        ax * (bx(i + 1, j, k) * (pval(p, i + 1, j, k) - pc) -
                              bx(i, j, k) * (pc - pval(p, i - 1, j, k))) +
                        ay * (by(i, j + 1, k) * (pval(p, i, j + 1, k) - pc) -
                              by(i, j, k) * (pc - pval(p, i, j - 1, k))) +
                        az * (bz(i, j, k + 1) * (pval(p, i, j, k + 1) - pc) -
                              bz(i, j, k) * (pc - pval(p, i, j, k - 1)));
                    r(i, j, k) = rhs(i, j, k) - flux;
                }
        });
    }

    void smooth(const Array3& rhs, int sweeps, bool reverse = false) {
        double ax = 1.0 / (hx * hx), ay = 1.0 / (hy * hy), az = 1.0 / (hz * hz);
        for (int s = 0; s < 2 * sweeps; ++s) {
            int color = reverse ? 1 - (s & 1) : (s & 1);
            parallel_for(0, nz, [&](int k) {
                for (int j = 0; j < ny; ++j) {
                    int i0 = (color + j + k) & 1;
                    for (int i = i0; i < nx; i += 2) {
                        double diag = ax * (bx(i + 1, j, k) + bx(i, j, k)) +
                                      ay * (by(i, j + 1, k) + by(i, j, k)) +
                                      az * (bz(i, j, k + 1) + bz(i, j, k));
                        if (diag == 0.0) continue;
                        double off =
                            ax * (bx(i + 1, j, k) * pval(p, i + 1, j, k) +
                                  bx(i, j, k) * pval(p, i - 1, j, k)) +
                            ay * (by(i, j + 1, k) * pval(p, i, j + 1, k) +
                                  by(i, j, k) * pval(p, i, j - 1, k)) +
                            az * (bz(i, j, k + 1) * pval(p, i, j, k + 1) +
                                  bz(i, j, k) * pval(p, i, j, k - 1));
                        p(i, j, k) = (off - rhs(i, j, k)) / diag;
                    }
                }
            });
        }
    }
};

struct Hierarchy {
    std::vector<Level> levels;
    std::vector<Array3> rhs;  // per-level right-hand sides

    static bool can_coarsen(const Level& l) {
        return l.nx % 2 == 0 && l.ny % 2 == 0 && l.nz % 2 == 0 && l.nx >= 4 &&
               l.ny >= 4 && l.nz >= 4;
    }

    void build(const Level& fine_template) {
        levels.clear();
        rhs.clear();
        levels.push_back(fine_template);
        while (can_coarsen(levels.back()) && levels.size() < 16) {
            const Level& f = levels.back();
            Level c(f.nx / 2, f.ny / 2, f.nz / 2, 2.0 * f.hx, 2.0 * f.hy, 2.0 * f.hz,
                    f.periodic);
            // coarse face coefficient: mean of the 4 geometrically matching fine faces
            for (int k = 0; k < c.nz; ++k)
                for (int j = 0; j < c.ny; ++j)
                    for (int i = 0; i <= c.nx; ++i)
                        c.bx(i, j, k) = 0.25 * (f.bx(2 * i, 2 * j, 2 * k) +
                                                f.bx(2 * i, 2 * j + 1, 2 * k) +
                                                f.bx(2 * i, 2 * j, 2 * k + 1) +
                                                f.bx(2 * i, 2 * j + 1, 2 * k + 1));
            for (int k = 0; k < c.nz; ++k)
                for (int j = 0; j <= c.ny; ++j)
                    for (int i = 0; i < c.nx; ++i)
                        c.by(i, j, k) = 0.25 * (f.by(2 * i, 2 * j, 2 * k) +
                                                f.by(2 * i + 1, 2 * j, 2 * k) +
                                                f.by(2 * i, 2 * j, 2 * k + 1) +
                                                f.by(2 * i + 1, 2 * j, 2 * k + 1));
            for (int k = 0; k <= c.nz; ++k)
                for (int j = 0; j < c.ny; ++j)
                    for (int i = 0; i < c.nx; ++i)
                        c.bz(i, j, k) = 0.25 * (f.bz(2 * i, 2 * j, 2 * k) +
                                                f.bz(2 * i + 1, 2 * j, 2 * k) +
                                                f.bz(2 * i, 2 * j + 1, 2 * k) +
                                                f.bz(2 * i + 1, 2 * j + 1, 2 * k));
            levels.push_back(std::move(c));
        }
        for (const Level& l : levels) rhs.emplace_back(l.nx, l.ny, l.nz);
    }

    void vcycle(size_t depth, int sweeps) {
        Level& l = levels[depth];
        if (depth + 1 == levels.size()) {
            l.smooth(rhs[depth], 30);
            return;
        }
        l.smooth(rhs[depth], sweeps);
        l.residual(rhs[depth]);
        Level& c = levels[depth + 1];
        // restrict: average of 8 fine residuals
        for (int k = 0; k < c.nz; ++k)
            for (int j = 0; j < c.ny; ++j)
                for (int i = 0; i < c.nx; ++i) {
                    double s = 0.0;
                    for (int dk = 0; dk < 2; ++dk)
                        for (int dj = 0; dj < 2; ++dj)
                            for (int di = 0; di < 2; ++di)
                                s += l.r(2 * i + di, 2 * j + dj, 2 * k + dk);
                    rhs[depth + 1](i, j, k) = 0.125 * s;
                }
        c.p.fill(0.0);
        vcycle(depth + 1, sweeps);
        // prolong: piecewise-constant correction
        for (int k = 0; k < l.nz; ++k)
            for (int j = 0; j < l.ny; ++j)
                for (int i = 0; i < l.nx; ++i)
                    l.p(i, j, k) += c.p(i / 2, j / 2, k / 2);
        l.smooth(rhs[depth], sweeps, /*reverse=*/true);
    }
};

inline double dot_arrays(const Array3& a, const Array3& b) {
    return ordered_sum(0, a.sz, [&](int k) {
        double s = 0.0;
        for (int j = 0; j < a.sy; ++j)
            for (int i = 0; i < a.sx; ++i) s += a(i, j, k) * b(i, j, k);
        return s;
    });
}

inline void remove_mean(Array3& a) {
    double n = static_cast<double>(a.sx) * a.sy * a.sz;
    double mean = ordered_sum(0, a.sz, [&](int k) {
        double s = 0.0;
        for (int j = 0; j < a.sy; ++j)
            for (int i = 0; i < a.sx; ++i) s += a(i, j, k);
        return s;
    }) / n;
    parallel_for(0, a.sz, [&](int k) {
        for (int j = 0; j < a.sy; ++j)
            for (int i = 0; i < a.sx; ++i) a(i, j, k) -= mean;
    });
}

}  // namespace mg

struct PoissonResult {
    int iterations = 0;
    double residual = 0.0;
};

/// Solves div(beta grad p) = rhs by V-cycle-preconditioned conjugate gradients.
/// All boundaries are Neumann (beta = 0 faces) or periodic, so the mean of the
/// solution is pinned to zero. Throws SolverError with the residual history on
/// non-convergence.
inline PoissonResult solve_variable_poisson(mg::Hierarchy& h, const Array3& rhs_in,
                                            Array3& x_out, const PoissonSettings& st) {
    st.validate();
    mg::Level& fine = h.levels[0];

    Array3 b = rhs_in;
    mg::remove_mean(b);  // compatibility for the pure-Neumann/periodic problem

    Array3 x(fine.nx, fine.ny, fine.nz), r = b, z(fine.nx, fine.ny, fine.nz),
        q(fine.nx, fine.ny, fine.nz);

    double bnorm = std::sqrt(mg::dot_arrays(b, b));
    if (bnorm == 0.0) {
        x_out = x;
        return {0, 0.0};
    }

    auto precondition = [&](const Array3& res, Array3& out) {
        h.rhs[0] = res;
        fine.p.fill(0.0);
        h.vcycle(0, st.smoother_sweeps);
        out = fine.p;
        mg::remove_mean(out);
    };

    auto operator_apply = [&](const Array3& in, Array3& out) {
        // out = A in  (reuse residual with rhs = 0: r = -A p)
        fine.p = in;
        Array3 zero(fine.nx, fine.ny, fine.nz);
        fine.residual(zero);
        parallel_for(0, fine.nz, [&](int k) {
            for (int j = 0; j < fine.ny; ++j)
                for (int i = 0; i < fine.nx; ++i) out(i, j, k) = -fine.r(i, j, k);
        });
    };

    precondition(r, z);
    Array3 p_dir = z;
    double rz = mg::dot_arrays(r, z);
    std::vector<double> history;
    double res_norm = bnorm;

    for (int it = 0; it < st.max_iterations; ++it) {
        operator_apply(p_dir, q);
        double pq = mg::dot_arrays(p_dir, q);
        if (pq == 0.0) break;
        double alpha = rz / pq;
        parallel_for(0, fine.nz, [&](int k) {
            for (int j = 0; j < fine.ny; ++j)
                for (int i = 0; i < fine.nx; ++i) {
                    x(i, j, k) += alpha * p_dir(i, j, k);
                    r(i, j, k) -= alpha * q(i, j, k);
                }
        });
        res_norm = std::sqrt(mg::dot_arrays(r, r));
        history.push_back(res_norm);
        if (res_norm <= st.tolerance * bnorm) {
            mg::remove_mean(x);
            x_out = x;
            return {it + 1, res_norm / bnorm};
        }
        precondition(r, z);
        double rz_new = mg::dot_arrays(r, z);
        double beta = rz_new / rz;
        rz = rz_new;
        parallel_for(0, fine.nz, [&](int k) {
            for (int j = 0; j < fine.ny; ++j)
                for (int i = 0; i < fine.nx; ++i)
                    p_dir(i, j, k) = z(i, j, k) + beta * p_dir(i, j, k);
        });
    }

    std::ostringstream msg;
    msg << "poisson: no convergence in " << st.max_iterations
        << " iterations; residual history:";
    for (size_t i = history.size() > 8 ? history.size() - 8 : 0; i < history.size(); ++i)
        msg << " " << history[i] / bnorm;
    throw SolverError(msg.str());
}

}  // namespace lcrm
