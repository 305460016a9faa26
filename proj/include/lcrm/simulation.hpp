#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "lcrm/config.hpp"
#include "lcrm/distance.hpp"
#include "lcrm/field.hpp"
#include "lcrm/flow.hpp"
#include "lcrm/forces.hpp"
#include "lcrm/front.hpp"
#include "lcrm/indicator.hpp"
#include "lcrm/io.hpp"
#include "lcrm/peskin.hpp"
#include "lcrm/reconstruct.hpp"
#include "lcrm/surfactant_bulk.hpp"
#include "lcrm/surfactant_surface.hpp"

namespace lcrm {

struct Diagnostics {
    double surface_clamped_mass = 0.0;
    double bulk_clamped_mass = 0.0;
    long probe_fallbacks = 0;
    long frame_fallbacks = 0;
    long clamped_vertices = 0;
    long dropped_elements = 0;
};

/// Everything that persists across steps. Derived fields (distance, indicator,
/// Eulerian surfactant, forces) are rebuilt inside each step.
struct SimulationState {
    RunConfig cfg;
    double time = 0.0;
    long step_index = 0;
    MacVelocity vel;
    ScalarField pressure;
    FrontMesh front;
    ScalarField c_bulk;
    Diagnostics diag;

    /// Benchmark hook: when set, the interfacial concentration is prescribed
    /// (reassigned after advection) instead of evolved.
    std::function<double(const Vec3&, double)> prescribe_gamma;

    VelocityBC velocity_bc() const {
        VelocityBC bc;
        if (cfg.shear_rate != 0.0) {
            double z_lo = cfg.grid.origin.z;
            double z_hi = cfg.grid.origin.z + cfg.grid.length(2);
            bc.wall_velocity[ZLo] = {cfg.shear_rate * z_lo, 0.0, 0.0};
            bc.wall_velocity[ZHi] = {cfg.shear_rate * z_hi, 0.0, 0.0};
        }
        return bc;
    }
};

struct StepReport {
    double dt = 0.0;
    double surface_mass = 0.0;
    double bulk_mass = 0.0;
    double min_gamma = 0.0, max_gamma = 0.0;
    double max_velocity = 0.0;
    int poisson_iterations = 0;
    bool reconstructed = false;
};

/// Builds the initial triangle soup by contouring the analytic distance field of
/// the configured shape.
inline FrontMesh initial_front(const RunConfig& cfg) {
    const GridSpec& g = cfg.grid;
    ScalarField phi(g);
    if (cfg.init_shape == InitShape::sphere) {
        for (int k = -2; k < g.nz + 2; ++k)
            for (int j = -2; j < g.ny + 2; ++j)
                for (int i = -2; i < g.nx + 2; ++i)
                    phi(i, j, k) =
                        norm(g.cell_center(i, j, k) - cfg.sphere_center) - cfg.sphere_radius;
    } else if (cfg.init_shape == InitShape::cylinder) {
        Vec3 c = 0.5 * (g.domain_lo() + g.domain_hi());
        for (int k = -2; k < g.nz + 2; ++k)
            for (int j = -2; j < g.ny + 2; ++j)
                for (int i = -2; i < g.nx + 2; ++i) {
                    Vec3 p = g.cell_center(i, j, k);
                    double r = std::sqrt((p.x - c.x) * (p.x - c.x) +
                                         (p.y - c.y) * (p.y - c.y));
                    phi(i, j, k) = r - cfg.cylinder_radius;
                }
    } else {
        throw ConfigError("initial_front: no init shape configured");
    }
    FrontMesh mesh = detail::march_contour(phi, 0.0, nullptr);
    for (FrontElement& e : mesh.elements) e.gamma = cfg.gamma_init;
    return mesh;
}

inline SimulationState init_state(const RunConfig& cfg) {
    if (cfg.threads > 0) set_worker_count(cfg.threads);
    if (cfg.deterministic) set_worker_count(1);
    SimulationState st;
    st.cfg = cfg;
    st.vel = MacVelocity(cfg.grid);
    st.pressure = ScalarField(cfg.grid);
    st.front = initial_front(cfg);
    st.c_bulk = ScalarField(cfg.grid);
    if (cfg.soluble) {
        DistanceField d = build_distance(st.front, cfg.grid);
        for_cells(cfg.grid, [&](int i, int j, int k) {
            st.c_bulk(i, j, k) = d.phi(i, j, k) > 0.0 ? cfg.c_init : 0.0;
        });
        apply_boundary(st.c_bulk);
    }
    VelocityBC bc = st.velocity_bc();
    apply_boundary(st.vel, &bc);
    return st;
}

/// One coupled time step, in the order: front advection (capturing the area
/// ratio), field reconstruction from the new front, surfactant distribution and
/// frames, probing and diffusion, source and concentration update, ghost fill and
/// bulk transport, interfacial forces, predictor and projection, periodic
/// interface reconstruction, diagnostics.
inline StepReport sim_step(SimulationState& st, double dt) {
    const RunConfig& cfg = st.cfg;
    const GridSpec& g = cfg.grid;
    const double h = g.min_h();
    const double eps_geom = geometry_epsilon(h);
    StepReport rep;
    rep.dt = dt;

    // (1) advect the front; prev_area is snapshotted inside
    AdvectStats adv = advect_front(st.front, st.vel, dt, eps_geom);
    st.diag.clamped_vertices += adv.clamped_vertices;
    st.diag.dropped_elements += adv.dropped_elements;
    if (st.front.empty()) throw GeometryError("sim_step: interface vanished");

    if (st.prescribe_gamma) {
        for (FrontElement& e : st.front.elements)
            e.gamma = st.prescribe_gamma(element_centroid(e), st.time);
    }

    const bool will_reconstruct =
        cfg.reconstruct_every > 0 && (st.step_index + 1) % cfg.reconstruct_every == 0;
    const bool needs_fields = cfg.soluble || cfg.surfactant.d_s > 0.0 || cfg.has_tension ||
                              cfg.flow_enabled || will_reconstruct;

    // (2) distance, indicator, material fields (skipped for purely kinematic steps
    // that only exercise the area-ratio update)
    DistanceField dist;
    IndicatorField ind;
    SurfField gamma_x;
    const size_t ne = st.front.size();
    std::vector<ElementFrame> frames;
    if (needs_fields) {
        dist = build_distance(st.front, g);
        ind = build_indicator(dist);
        // (3) Eulerian surfactant field and element frames
        gamma_x = normalized_surface_field(st.front, g);
        frames.resize(ne);
        std::vector<int> frame_fb(ne, 0);
        parallel_for(0, static_cast<int>(ne), [&](int i) {
            frames[static_cast<size_t>(i)] = element_frame(
                st.front.elements[static_cast<size_t>(i)], dist.phi, eps_geom);
            frame_fb[static_cast<size_t>(i)] = frames[static_cast<size_t>(i)].phi_fallbacks;
        });
        for (int f : frame_fb) st.diag.frame_fallbacks += f;
    }

    CellMask p2;
    if (cfg.soluble) p2 = phase2_mask(dist);

    std::vector<double> source(ne, 0.0);
    if (!st.prescribe_gamma && cfg.has_surfactant) {
        // (4) probing and the line-integral diffusion term
        std::vector<double> dgamma(ne, 0.0);
        std::vector<int> probe_fb(ne, 0);
        if (cfg.surfactant.d_s > 0.0) {
            parallel_for(0, static_cast<int>(ne), [&](int i) {
                const ElementFrame& fr = frames[static_cast<size_t>(i)];
                double grads[3];
                for (int k = 0; k < 3; ++k) {
                    ProbeResult r = probe_gradient_p(fr, k, h, gamma_x, dist.phi);
                    grads[k] = r.grad;
                    probe_fb[static_cast<size_t>(i)] += r.fallback;
                }
                dgamma[static_cast<size_t>(i)] =
                    diffusion_term(fr, grads, cfg.surfactant.d_s);
            });
            for (int f : probe_fb) st.diag.probe_fallbacks += f;
        }

        // (5) source term and the concentration update
        SourceModel model =
            cfg.adsorption_only ? SourceModel::adsorption_only : SourceModel::full;
        std::vector<double> c_s(ne, 0.0);
        if (cfg.soluble) {
            parallel_for(0, static_cast<int>(ne), [&](int i) {
                const FrontElement& e = st.front.elements[static_cast<size_t>(i)];
                Vec3 probe = element_centroid(e) +
                             2.0 * h * element_normal(e, eps_geom);
                c_s[static_cast<size_t>(i)] =
                    sample_masked(st.c_bulk, p2, probe).value_or(0.0);
            });
        }
        std::vector<double> clamped(ne, 0.0);
        parallel_for(0, static_cast<int>(ne), [&](int i) {
            FrontElement& e = st.front.elements[static_cast<size_t>(i)];
            double s = source_term(e.gamma, c_s[static_cast<size_t>(i)], cfg.surfactant,
                                   model);
            double a_r = area_ratio(e, eps_geom);
            GammaUpdate u = update_gamma(e, a_r, dgamma[static_cast<size_t>(i)], s, dt,
                                         cfg.surfactant, h);
            e.gamma = u.gamma;
            clamped[static_cast<size_t>(i)] = u.clamped_mass;
        });
        for (double c : clamped) st.diag.surface_clamped_mass += c;

        // (6) sharp ghost condition and bulk transport, with the source evaluated
        // at the updated surface concentration
        if (cfg.soluble) {
            parallel_for(0, static_cast<int>(ne), [&](int i) {
                const FrontElement& e = st.front.elements[static_cast<size_t>(i)];
                source[static_cast<size_t>(i)] = source_term(
                    e.gamma, c_s[static_cast<size_t>(i)], cfg.surfactant, model);
            });
            auto ghosts = identify_ghosts(dist);
            fill_ghosts(st.c_bulk, ghosts, source, cfg.d_c2, dist, p2);
            BulkStepStats bs;
            st.c_bulk = step_bulk(st.c_bulk, cfg.flow_enabled ? &st.vel : nullptr, dist,
                                  cfg.d_c2, dt, &bs);
            st.diag.bulk_clamped_mass += bs.clamped_mass;
            // deep phase-1 cells stay empty
            for_cells(g, [&](int i, int j, int k) {
                if (dist.phi(i, j, k) <= 0.0 && !p2(i, j, k)) {
                    bool ghost = dist.phi(i + 1, j, k) > 0.0 || dist.phi(i - 1, j, k) > 0.0 ||
                                 dist.phi(i, j + 1, k) > 0.0 || dist.phi(i, j - 1, k) > 0.0 ||
                                 dist.phi(i, j, k + 1) > 0.0 || dist.phi(i, j, k - 1) > 0.0;
                    if (!ghost) st.c_bulk(i, j, k) = 0.0;
                }
            });
            apply_boundary(st.c_bulk);
        }
    }

    // (7)-(8) interfacial forces and the momentum update
    VelocityBC bc = st.velocity_bc();
    if (cfg.flow_enabled) {
        ScalarField rho = mix_property(ind, cfg.fluids.rho1, cfg.fluids.rho2);
        ScalarField mu = mix_property(ind, cfg.fluids.mu1, cfg.fluids.mu2);

        MacVelocity force(g);
        if (cfg.has_tension) {
            // refresh the Eulerian field so sigma sees the updated concentrations
            gamma_x = normalized_surface_field(st.front, g);
            ForceFields ff(g);
            std::vector<double> sigma_elem(ne);
            for (size_t i = 0; i < ne; ++i) {
                double gv = st.front.elements[i].gamma;
                if (cfg.tension.eos_kind == EosKind::langmuir &&
                    gv >= cfg.surfactant.gamma_inf)
                    gv = cfg.surfactant.gamma_inf * (1.0 - 1e-12);
                sigma_elem[i] = eos(gv, cfg.tension, cfg.surfactant.gamma_inf);
            }
            normal_force(st.front, frames, ind, sigma_elem, ff);
            int fb = 0;
            if (cfg.tension.beta_s != 0.0 && cfg.has_surfactant) {
                ScalarField sigma_x = sigma_field_from_gamma(
                    gamma_x, cfg.tension, cfg.surfactant.gamma_inf);
                marangoni_force(st.front, frames, sigma_x, gamma_x.band, dist.phi, h, ff, &fb);
                st.diag.probe_fallbacks += fb;
            }
            parallel_for(0, g.nz + 1, [&](int k) {
                for (int j = 0; j < g.ny + 1; ++j)
                    for (int i = 0; i < g.nx + 1; ++i) {
                        if (j < g.ny && k < g.nz)
                            force.fu(i, j, k) = ff.f_n.fu(i, j, k) + ff.f_s.fu(i, j, k);
                        if (i < g.nx && k < g.nz)
                            force.fv(i, j, k) = ff.f_n.fv(i, j, k) + ff.f_s.fv(i, j, k);
                        if (i < g.nx && j < g.ny)
                            force.fw(i, j, k) = ff.f_n.fw(i, j, k) + ff.f_s.fw(i, j, k);
                    }
            });
        }

        st.vel = predictor(st.vel, rho, mu, ind.ind, cfg.has_tension ? &force : nullptr,
                           cfg.fluids, dt, &bc);
        ProjectionResult pres = project(st.vel, rho, dt, cfg.poisson, &bc);
        st.pressure = pres.pressure;
        rep.poisson_iterations = pres.iterations;
    }

    // (9) periodic interface reconstruction
    st.step_index += 1;
    st.time += dt;
    if (cfg.reconstruct_every > 0 && st.step_index % cfg.reconstruct_every == 0) {
        double mass = surface_mass(st.front);
        double volume = enclosed_volume(st.front);
        gamma_x = normalized_surface_field(st.front, g);
        ReconstructStats rstats;
        FrontMesh rebuilt = reconstruct(dist, &gamma_x, mass, volume, &rstats);
        if (!rebuilt.empty()) {
            st.front = std::move(rebuilt);
            rep.reconstructed = true;
        }
    }

    // (10) diagnostics
    rep.surface_mass = surface_mass(st.front);
    if (cfg.soluble) rep.bulk_mass = bulk_mass(st.c_bulk, ind);
    rep.min_gamma = std::numeric_limits<double>::max();
    rep.max_gamma = -std::numeric_limits<double>::max();
    for (const FrontElement& e : st.front.elements) {
        rep.min_gamma = std::min(rep.min_gamma, e.gamma);
        rep.max_gamma = std::max(rep.max_gamma, e.gamma);
    }
    if (st.front.empty()) rep.min_gamma = rep.max_gamma = 0.0;
    rep.max_velocity = max_abs_velocity(st.vel);
    if (!std::isfinite(rep.surface_mass) || !std::isfinite(rep.max_velocity))
        throw SolverError("sim_step: non-finite state at step " +
                          std::to_string(st.step_index));
    return rep;
}

inline double suggested_dt(const SimulationState& st) {
    const RunConfig& cfg = st.cfg;
    double umax = max_abs_velocity(st.vel);
    double sigma_max = cfg.has_tension ? cfg.tension.sigma_s : 0.0;
    return timestep_limit(umax, cfg.grid.min_h(), cfg.fluids, sigma_max,
                          cfg.has_surfactant ? cfg.surfactant.d_s : 0.0,
                          cfg.soluble ? cfg.d_c2 : 0.0);
}

// ---------------------------------------------------------------------------
// Checkpointing
// ---------------------------------------------------------------------------

namespace detail {
constexpr char kCkptMagic[8] = {'L', 'C', 'R', 'M', 'C', 'K', 'P', 'T'};
constexpr uint32_t kCkptVersion = 1;

template <class T>
void put(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <class T>
void get(std::istream& in, T& v) {
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw IoError("checkpoint: truncated or corrupt file");
}

inline void put_array(std::ostream& out, const Array3& a) {
    put(out, a.sx);
    put(out, a.sy);
    put(out, a.sz);
    out.write(reinterpret_cast<const char*>(a.data.data()),
              static_cast<std::streamsize>(a.data.size() * sizeof(double)));
}

inline void get_array(std::istream& in, Array3& a) {
    int sx, sy, sz;
    get(in, sx);
    get(in, sy);
    get(in, sz);
    if (sx != a.sx || sy != a.sy || sz != a.sz)
        throw IoError("checkpoint: array extent mismatch");
    in.read(reinterpret_cast<char*>(a.data.data()),
            static_cast<std::streamsize>(a.data.size() * sizeof(double)));
    if (!in) throw IoError("checkpoint: truncated or corrupt file");
}
}  // namespace detail

inline void save_checkpoint(const SimulationState& st, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("checkpoint: cannot open " + path);
    out.write(detail::kCkptMagic, sizeof detail::kCkptMagic);
    detail::put(out, detail::kCkptVersion);
    detail::put(out, st.cfg.grid.nx);
    detail::put(out, st.cfg.grid.ny);
    detail::put(out, st.cfg.grid.nz);
    detail::put(out, st.time);
    detail::put(out, st.step_index);
    detail::put_array(out, st.vel.u);
    detail::put_array(out, st.vel.v);
    detail::put_array(out, st.vel.w);
    detail::put_array(out, st.pressure.a);
    uint8_t has_bulk = st.cfg.soluble ? 1 : 0;
    detail::put(out, has_bulk);
    if (has_bulk) detail::put_array(out, st.c_bulk.a);
    uint64_t n = st.front.size();
    detail::put(out, n);
    for (const FrontElement& e : st.front.elements) {
        detail::put(out, e.v1);
        detail::put(out, e.v2);
        detail::put(out, e.v3);
        detail::put(out, e.gamma);
        detail::put(out, e.prev_area);
    }
    detail::put(out, st.diag);
    if (!out) throw IoError("checkpoint: write failed for " + path);
}

inline void restore_checkpoint(SimulationState& st, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("checkpoint: cannot open " + path);
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, detail::kCkptMagic, sizeof magic) != 0)
        throw IoError("checkpoint: bad magic (not a checkpoint file)");
    uint32_t version;
    detail::get(in, version);
    if (version != detail::kCkptVersion)
        throw IoError("checkpoint: version mismatch (file " + std::to_string(version) +
                      ", expected " + std::to_string(detail::kCkptVersion) + ")");
    int nx, ny, nz;
    detail::get(in, nx);
    detail::get(in, ny);
    detail::get(in, nz);
    if (nx != st.cfg.grid.nx || ny != st.cfg.grid.ny || nz != st.cfg.grid.nz)
        throw IoError("checkpoint: grid mismatch with configuration");
    detail::get(in, st.time);
    detail::get(in, st.step_index);
    detail::get_array(in, st.vel.u);
    detail::get_array(in, st.vel.v);
    detail::get_array(in, st.vel.w);
    detail::get_array(in, st.pressure.a);
    uint8_t has_bulk;
    detail::get(in, has_bulk);
    if (has_bulk) detail::get_array(in, st.c_bulk.a);
    uint64_t n;
    detail::get(in, n);
    st.front.elements.assign(n, FrontElement{});
    for (FrontElement& e : st.front.elements) {
        detail::get(in, e.v1);
        detail::get(in, e.v2);
        detail::get(in, e.v3);
        detail::get(in, e.gamma);
        detail::get(in, e.prev_area);
    }
    detail::get(in, st.diag);
}

// ---------------------------------------------------------------------------
// Run loop with diagnostics and snapshot output
// ---------------------------------------------------------------------------

inline void write_snapshot(const SimulationState& st, const std::string& dir) {
    const GridSpec& g = st.cfg.grid;
    std::string tag = std::to_string(st.step_index);
    write_vtk_scalar(st.pressure, dir + "/P_" + tag + ".vtk", "P");
    write_vtk_velocity(st.vel, dir + "/velocity_" + tag + ".vtk");
    if (st.cfg.soluble) write_vtk_scalar(st.c_bulk, dir + "/C_" + tag + ".vtk", "C");
    if (!st.front.empty()) {
        DistanceField d = build_distance(st.front, g);
        write_vtk_scalar(d.phi, dir + "/phi_" + tag + ".vtk", "phi");
        SurfField sf = normalized_surface_field(st.front, g);
        write_vtk_scalar(sf.gamma, dir + "/gamma_" + tag + ".vtk", "gamma");
        write_front_obj(st.front, dir + "/front_" + tag + ".obj",
                        dir + "/front_" + tag + ".csv");
    }
}

/// Full simulation driver: steps to t_end / max_steps, writing the per-step
/// diagnostics CSVs and periodic snapshots/checkpoints into cfg.out_dir.
inline void run_simulation(SimulationState& st, std::ostream* log = nullptr) {
    const RunConfig& cfg = st.cfg;
    ensure_directory(cfg.out_dir);
    std::ofstream surf_csv(cfg.out_dir + "/surface_diag.csv");
    surf_csv << "t,surface_mass,clamped_mass,min_gamma,max_gamma\n";
    std::ofstream bulk_csv;
    if (cfg.soluble) {
        bulk_csv.open(cfg.out_dir + "/bulk_diag.csv");
        bulk_csv << "t,bulk_mass,total_mass\n";
    }

    char buf[256];
    while ((cfg.t_end <= 0.0 || st.time < cfg.t_end - 1e-15) &&
           (cfg.max_steps <= 0 || st.step_index < cfg.max_steps)) {
        double dt = suggested_dt(st);
        if (cfg.t_end > 0.0) dt = std::min(dt, cfg.t_end - st.time);
        StepReport rep = sim_step(st, dt);

        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g\n", st.time,
                      rep.surface_mass, st.diag.surface_clamped_mass, rep.min_gamma,
                      rep.max_gamma);
        surf_csv << buf;
        if (cfg.soluble) {
            std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", st.time, rep.bulk_mass,
                          rep.surface_mass + rep.bulk_mass);
            bulk_csv << buf;
        }
        if (cfg.output_every > 0 && st.step_index % cfg.output_every == 0)
            write_snapshot(st, cfg.out_dir);
        if (cfg.checkpoint_every > 0 && st.step_index % cfg.checkpoint_every == 0)
            save_checkpoint(st, cfg.out_dir + "/checkpoint_" +
                                    std::to_string(st.step_index) + ".ckpt");
        if (log) {
            (*log) << "step " << st.step_index << " t=" << st.time << " dt=" << rep.dt
                   << " |u|=" << rep.max_velocity << " Ms=" << rep.surface_mass
                   << " pois=" << rep.poisson_iterations << "\n";
        }
    }
}

}  // namespace lcrm
