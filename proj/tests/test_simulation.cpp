#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "lcrm/bench.hpp"
#include "lcrm/simulation.hpp"
#include "test_util.hpp"

using namespace lcrm;

namespace {

RunConfig kinematic_sphere_config(int n, double box, double r0) {
    RunConfig cfg;
    cfg.grid = make_grid(n, n, n, {-box / 2, -box / 2, -box / 2}, box / n,
                         BoundaryKind::zero_gradient);
    cfg.flow_enabled = false;
    cfg.has_surfactant = true;
    cfg.surfactant.gamma_inf = 1.0;
    cfg.gamma_init = 1.0;
    cfg.reconstruct_every = 20;
    cfg.init_shape = InitShape::sphere;
    cfg.sphere_center = {0, 0, 0};
    cfg.sphere_radius = r0;
    cfg.max_steps = 1000;
    return cfg;
}

}  // namespace

TEST_CASE("initial_front builds a sphere with the right area and volume") {
    RunConfig cfg = kinematic_sphere_config(48, 2.5, 0.5);
    FrontMesh mesh = initial_front(cfg);
    CHECK(total_area(mesh) == Catch::Approx(4.0 * M_PI * 0.25).epsilon(0.02));
    CHECK(enclosed_volume(mesh) ==
          Catch::Approx(4.0 / 3.0 * M_PI * 0.125).epsilon(0.03));
    for (const FrontElement& e : mesh.elements) CHECK(e.gamma == 1.0);
}

TEST_CASE("kinematic expansion through the orchestrator tracks the dilution law") {
    RunConfig cfg = kinematic_sphere_config(32, 2.5, 0.5);
    SimulationState st = init_state(cfg);
    fill_radial_velocity(st.vel, {0, 0, 0}, 0.01);
    double max_rel = 0.0;
    for (int s = 0; s < 200; ++s) {
        sim_step(st, 0.05);
        double meas = surface_mass(st.front) / total_area(st.front);
        double exact = oracle_expanding_sphere(st.time, 0.5, 0.01, 1.0);
        max_rel = std::max(max_rel, std::abs(meas - exact) / exact);
    }
    INFO("max relative deviation " << max_rel);
    CHECK(max_rel < 0.02);
    CHECK(st.step_index == 200);
}

TEST_CASE("uniform translation in a periodic box conserves mass and moves the drop") {
    RunConfig cfg;
    cfg.grid = make_grid(32, 32, 32, {-1.25, -1.25, -1.25}, 2.5 / 32);
    cfg.flow_enabled = false;
    cfg.has_surfactant = true;
    cfg.surfactant.gamma_inf = 2.0;
    cfg.gamma_init = 1.0;
    cfg.reconstruct_every = 20;
    cfg.init_shape = InitShape::sphere;
    cfg.sphere_center = {0, 0, 0};
    cfg.sphere_radius = 0.4;
    cfg.max_steps = 50;
    SimulationState st = init_state(cfg);
    MacVelocity uni(cfg.grid, {0.3, 0.0, 0.0});
    st.vel = uni;
    double mass0 = surface_mass(st.front);

    double dt = 0.05;
    for (int s = 0; s < 50; ++s) sim_step(st, dt);

    CHECK(surface_mass(st.front) == Catch::Approx(mass0).epsilon(1e-9));
    // centroid advanced by u t (modulo the periodic wrap, which 0.75 avoids)
    Vec3 c{};
    double asum = 0.0;
    for (const FrontElement& e : st.front.elements) {
        double a = element_area(e);
        c += a * element_centroid(e);
        asum += a;
    }
    c *= 1.0 / asum;
    double xc = c.x;
    double expect = std::remainder(0.3 * st.time, 2.5);
    CHECK(xc == Catch::Approx(expect).margin(0.01));
}

TEST_CASE("quiescent clean drop stays quiet and keeps its concentration") {
    RunConfig cfg;
    cfg.grid = make_grid(32, 32, 32, {-1.25, -1.25, -1.25}, 2.5 / 32,
                         BoundaryKind::zero_gradient);
    cfg.fluids.rho1 = cfg.fluids.rho2 = 1.0;
    cfg.fluids.mu1 = cfg.fluids.mu2 = 0.1;
    cfg.has_surfactant = true;
    cfg.surfactant.gamma_inf = 1.0;
    cfg.gamma_init = 0.5;
    cfg.has_tension = true;
    cfg.tension.sigma_s = 1.0;
    cfg.tension.beta_s = 0.0;  // uniform sigma
    cfg.reconstruct_every = 0;
    cfg.init_shape = InitShape::sphere;
    cfg.sphere_center = {0, 0, 0};
    cfg.sphere_radius = 0.5;
    cfg.max_steps = 20;
    SimulationState st = init_state(cfg);

    double bound = 1e-3 * std::sqrt(1.0 / (1.0 * cfg.grid.hx));
    for (int s = 0; s < 20; ++s) {
        double dt = suggested_dt(st);
        StepReport rep = sim_step(st, dt);
        REQUIRE(rep.max_velocity <= bound);
    }
    for (const FrontElement& e : st.front.elements)
        REQUIRE(e.gamma == Catch::Approx(0.5).margin(1e-6));
}

TEST_CASE("checkpoint round trip continues bit-identically") {
    RunConfig cfg = kinematic_sphere_config(32, 2.5, 0.5);
    SimulationState st = init_state(cfg);
    fill_radial_velocity(st.vel, {0, 0, 0}, 0.01);
    for (int s = 0; s < 25; ++s) sim_step(st, 0.05);

    std::string path = "/tmp/lcrm_test_checkpoint.ckpt";
    save_checkpoint(st, path);

    SimulationState continued = st;
    for (int s = 0; s < 15; ++s) sim_step(continued, 0.05);

    SimulationState restored = init_state(cfg);
    fill_radial_velocity(restored.vel, {0, 0, 0}, 0.01);
    restore_checkpoint(restored, path);
    CHECK(restored.time == st.time);
    CHECK(restored.step_index == st.step_index);
    for (int s = 0; s < 15; ++s) sim_step(restored, 0.05);

    REQUIRE(restored.front.size() == continued.front.size());
    CHECK(surface_mass(restored.front) == surface_mass(continued.front));
    CHECK(total_area(restored.front) == total_area(continued.front));
    for (size_t i = 0; i < restored.front.size(); i += 37) {
        CHECK(restored.front.elements[i].v1.x == continued.front.elements[i].v1.x);
        CHECK(restored.front.elements[i].gamma == continued.front.elements[i].gamma);
    }
    std::remove(path.c_str());
}

TEST_CASE("checkpoint rejects truncation and version mismatches") {
    RunConfig cfg = kinematic_sphere_config(32, 2.5, 0.5);
    SimulationState st = init_state(cfg);
    std::string path = "/tmp/lcrm_test_checkpoint2.ckpt";
    save_checkpoint(st, path);

    // truncate
    {
        std::ifstream in(path, std::ios::binary);
        std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
        std::ofstream out(path + ".trunc", std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
    }
    SimulationState target = init_state(cfg);
    CHECK_THROWS_AS(restore_checkpoint(target, path + ".trunc"), IoError);

    // bump the version field (bytes 8..11)
    {
        std::ifstream in(path, std::ios::binary);
        std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
        bytes[8] = 99;
        std::ofstream out(path + ".ver", std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
    CHECK_THROWS_AS(restore_checkpoint(target, path + ".ver"), IoError);

    // wrong magic
    {
        std::ofstream out(path + ".magic", std::ios::binary);
        out << "definitely not a checkpoint";
    }
    CHECK_THROWS_AS(restore_checkpoint(target, path + ".magic"), IoError);

    std::remove(path.c_str());
    std::remove((path + ".trunc").c_str());
    std::remove((path + ".ver").c_str());
    std::remove((path + ".magic").c_str());
}

TEST_CASE("identical configurations give bit-identical trajectories") {
    auto run_once = [&]() {
        RunConfig cfg = kinematic_sphere_config(32, 2.5, 0.5);
        cfg.deterministic = false;  // deterministic by construction either way
        SimulationState st = init_state(cfg);
        fill_radial_velocity(st.vel, {0, 0, 0}, 0.01);
        std::vector<double> masses;
        for (int s = 0; s < 60; ++s) {
            sim_step(st, 0.05);
            masses.push_back(surface_mass(st.front));
        }
        return masses;
    };
    std::vector<double> a = run_once();
    std::vector<double> b = run_once();
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) REQUIRE(a[i] == b[i]);
}

TEST_CASE("run_simulation writes diagnostics and snapshots") {
    RunConfig cfg = kinematic_sphere_config(16, 2.5, 0.5);
    cfg.max_steps = 6;
    cfg.reconstruct_every = 3;
    cfg.output_every = 5;
    cfg.checkpoint_every = 5;
    cfg.out_dir = "/tmp/lcrm_run_test";
    SimulationState st = init_state(cfg);
    fill_radial_velocity(st.vel, {0, 0, 0}, 0.01);
    run_simulation(st);
    std::ifstream csv(cfg.out_dir + "/surface_diag.csv");
    REQUIRE(csv.good());
    std::string header;
    std::getline(csv, header);
    CHECK(header == "t,surface_mass,clamped_mass,min_gamma,max_gamma");
    int rows = 0;
    std::string line;
    while (std::getline(csv, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 6);
    CHECK(std::ifstream(cfg.out_dir + "/P_5.vtk").good());
    CHECK(std::ifstream(cfg.out_dir + "/front_5.obj").good());
    CHECK(std::ifstream(cfg.out_dir + "/checkpoint_5.ckpt").good());
}
