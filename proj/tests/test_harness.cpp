#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lcrm/bench.hpp"
#include "lcrm/config.hpp"
#include "test_util.hpp"

using namespace lcrm;

TEST_CASE("oracle_expanding_sphere dilution values") {
    CHECK(oracle_expanding_sphere(0.0, 0.5, 0.01, 1.0) == 1.0);
    CHECK(oracle_expanding_sphere(25.0, 0.5, 0.01, 1.0) == Catch::Approx(4.0 / 9.0));
    CHECK(oracle_expanding_sphere(1e9, 0.5, 0.01, 1.0) < 1e-10);
}

TEST_CASE("oracle_sphere_diffusion pole, equator, and decay values") {
    CHECK(oracle_sphere_diffusion(M_PI, 0.0, 1.0, 0.5) == Catch::Approx(1.0));
    CHECK(oracle_sphere_diffusion(M_PI / 2.0, 0.37, 1.0, 0.5) == Catch::Approx(0.5));
    CHECK(oracle_sphere_diffusion(M_PI, 0.2, 1.0, 0.5) ==
          Catch::Approx(0.5 * (1.0 + std::exp(-1.6))).epsilon(1e-12));
    CHECK(oracle_sphere_diffusion(M_PI, 0.2, 1.0, 0.5) == Catch::Approx(0.60095).margin(1e-4));
}

TEST_CASE("oracle_bulk_adsorption limits") {
    // t -> 0+: no depletion yet
    CHECK(oracle_bulk_adsorption(0.6, 1e-12, 1.0, 0.1, 0.5, 1.0) ==
          Catch::Approx(1.0).margin(1e-5));
    // k_a = 0: clean bulk stays at C_inf
    CHECK(oracle_bulk_adsorption(0.7, 0.3, 0.0, 0.1, 0.5, 1.0) == 1.0);
    // frozen value of the implementer-evaluated expression (k_a=1, D=0.1, R=0.5,
    // C_inf=1, t=0.1, r=R): depletion = (1*sqrt(pi*0.01)/0.1)/(1+(sqrt(pi*0.01)/0.5)*6)
    double sq = std::sqrt(M_PI * 0.1 * 0.1);
    double depl = (sq / 0.1) / (1.0 + (sq / 0.5) * (1.0 + 0.5 / 0.1));
    CHECK(oracle_bulk_adsorption(0.5, 0.1, 1.0, 0.1, 0.5, 1.0) ==
          Catch::Approx(1.0 - depl).epsilon(1e-12));
    // depletion decays away from the interface
    CHECK(oracle_bulk_adsorption(0.9, 0.1, 1.0, 0.1, 0.5, 1.0) >
          oracle_bulk_adsorption(0.5, 0.1, 1.0, 0.1, 0.5, 1.0));
}

TEST_CASE("oracle_ygb rise velocity") {
    CHECK(oracle_ygb(1.0, 0.0, 0.5, 5.0, 0.1, 0.1) == 0.0);
    CHECK(oracle_ygb(1.0, 0.1, 0.5, 5.0, 0.1, 0.1) == Catch::Approx(0.0133333).margin(1e-6));
    CHECK(oracle_ygb(1.0, 0.1, 1.0, 5.0, 0.1, 0.1) ==
          Catch::Approx(2.0 * oracle_ygb(1.0, 0.1, 0.5, 5.0, 0.1, 0.1)));
}

TEST_CASE("l1_error") {
    CHECK(l1_error({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) == 0.0);
    CHECK(l1_error({1.5, 2.5, 3.5}, {1.0, 2.0, 3.0}) == Catch::Approx(0.5));
    CHECK(l1_error({1.0}, {0.75}) == Catch::Approx(0.25));
    CHECK_THROWS_AS(l1_error({1.0, 2.0}, {1.0}), Error);
}

TEST_CASE("measure_drop_ellipsoid: sphere is degenerate, extents equal 2R") {
    FrontMesh mesh = lcrm::test::make_sphere_soup({0.2, -0.1, 0.3}, 0.5, 32);
    EllipsoidShape sh = measure_drop_ellipsoid(mesh);
    CHECK(sh.degenerate);
    CHECK(sh.theta_rot == 0.0);
    CHECK(sh.length == Catch::Approx(1.0).epsilon(0.01));
    CHECK(sh.width == Catch::Approx(1.0).epsilon(0.01));
    CHECK(sh.depth == Catch::Approx(1.0).epsilon(0.01));
    FrontMesh empty;
    CHECK_THROWS_AS(measure_drop_ellipsoid(empty), GeometryError);
}

TEST_CASE("measure_drop_ellipsoid recovers a rotated prolate ellipsoid") {
    // axes (2,1,1), major axis at 30 degrees in the shear (x-z) plane
    double th = M_PI / 6.0;
    Vec3 axis{std::cos(th), 0.0, std::sin(th)};
    FrontMesh mesh = lcrm::test::make_sphere_soup({0, 0, 0}, 1.0, 48);
    for (FrontElement& e : mesh.elements)
        for (Vec3* v : {&e.v1, &e.v2, &e.v3}) *v += dot(*v, axis) * axis;  // stretch x2
    EllipsoidShape sh = measure_drop_ellipsoid(mesh);
    CHECK_FALSE(sh.degenerate);
    CHECK(sh.theta_rot == Catch::Approx(0.5236).margin(0.01));
    CHECK(sh.length == Catch::Approx(4.0).epsilon(0.01));
    CHECK(sh.depth == Catch::Approx(2.0).epsilon(0.01));
    CHECK(sh.width == Catch::Approx(2.0).epsilon(0.01));
    CHECK(sh.length / sh.depth == Catch::Approx(2.0).epsilon(0.01));
}

TEST_CASE("run_benchmark rejects unknown names with the valid list") {
    BenchOptions opt;
    try {
        run_benchmark("never_heard_of_it", opt);
        FAIL("expected an error");
    } catch (const Error& e) {
        std::string msg = e.what();
        CHECK(msg.find("expanding_sphere") != std::string::npos);
        CHECK(msg.find("shear_drop") != std::string::npos);
    }
}

TEST_CASE("config parser handles sections, defaults, and strict keys") {
    std::string good = R"(
# comment
[grid]
nx = 16
ny = 16
nz = 16
lx = 2.5
ly = 2.5
lz = 2.5
origin_x = -1.25
origin_y = -1.25
origin_z = -1.25
bc_x = zero_gradient
bc_y = zero_gradient
bc_z = zero_gradient

[fluids]
rho1 = 1.0
rho2 = 1.0
mu1 = 0.1
mu2 = 0.1

[surfactant]
d_s = 0.5
gamma_inf = 1.0
k_a = 0.2
k_d = 0.1
d_c2 = 0.05
c_init = 1.0
soluble = true

[tension]
sigma_s = 1.0
beta_s = 0.3
eos = langmuir

[run]
t_end = 0.5
reconstruct_every = 20
out_dir = /tmp/lcrm_test_run
init = sphere
sphere_r = 0.5
)";
    RunConfig cfg = parse_config_text(good);
    CHECK(cfg.grid.nx == 16);
    CHECK(cfg.grid.hx == Catch::Approx(2.5 / 16));
    CHECK(cfg.surfactant.d_s == 0.5);
    CHECK(cfg.soluble);
    CHECK(cfg.tension.eos_kind == EosKind::langmuir);
    CHECK(cfg.reconstruct_every == 20);
    CHECK(cfg.sphere_radius == 0.5);

    CHECK_THROWS_AS(parse_config_text(good + "\n[run]\nnot_a_key = 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(good + "\n[nope]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[grid]\nnx = 16\n"), ConfigError);  // incomplete
    // values must parse
    CHECK_THROWS_AS(parse_config_text(good + "\n[run]\nt_end = banana\n"), ConfigError);
}

TEST_CASE("config rejects unpaired periodic axes via grid validation") {
    GridSpec g = make_grid(8, 8, 8, {0, 0, 0}, 1.0);
    g.bc[XLo] = BoundaryKind::periodic;
    g.bc[XHi] = BoundaryKind::no_slip_wall;
    CHECK_THROWS_AS(g.validate(), ConfigError);
}
