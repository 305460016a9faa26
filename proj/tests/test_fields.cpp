#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "lcrm/advect.hpp"
#include "lcrm/field.hpp"

using namespace lcrm;

namespace {

GridSpec unit_grid(int n, BoundaryKind kind) {
    return make_grid(n, n, n, {0.0, 0.0, 0.0}, 1.0 / n, kind);
}

void fill_from(ScalarField& f, double (*fn)(Vec3)) {
    const GridSpec& g = f.grid;
    for_cells_serial(g, [&](int i, int j, int k) { f(i, j, k) = fn(g.cell_center(i, j, k)); });
    apply_boundary(f);
}

}  // namespace

TEST_CASE("trilinear interpolation reproduces constants and linear fields") {
    GridSpec g = unit_grid(8, BoundaryKind::zero_gradient);

    ScalarField c(g, 3.25);
    apply_boundary(c);
    CHECK(interpolate_trilinear(c, {0.4, 0.7, 0.2}) == Catch::Approx(3.25).margin(1e-14));

    ScalarField fx(g);
    fill_from(fx, [](Vec3 p) { return p.x; });
    CHECK(interpolate_trilinear(fx, {0.37, 0.5, 0.5}) == Catch::Approx(0.37).margin(1e-14));
}

TEST_CASE("trilinear interpolation at a cell center picks that cell") {
    GridSpec g = unit_grid(8, BoundaryKind::zero_gradient);
    ScalarField f(g);
    f(3, 4, 5) = 7.5;
    apply_boundary(f);
    Vec3 p = g.cell_center(3, 4, 5);
    CHECK(interpolate_trilinear(f, p) == Catch::Approx(7.5).margin(1e-14));
}

TEST_CASE("trilinear interpolation is exact for a global linear field") {
    GridSpec g = unit_grid(12, BoundaryKind::zero_gradient);
    ScalarField f(g);
    fill_from(f, [](Vec3 p) { return 1.5 + 2.0 * p.x - 0.75 * p.y + 0.3 * p.z; });
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ud(1.5 / g.nx, 1.0 - 1.5 / g.nx);
    for (int trial = 0; trial < 200; ++trial) {
        Vec3 p{ud(rng), ud(rng), ud(rng)};
        double expect = 1.5 + 2.0 * p.x - 0.75 * p.y + 0.3 * p.z;
        CHECK(interpolate_trilinear(f, p) == Catch::Approx(expect).margin(1e-13));
    }
}

TEST_CASE("trilinear interpolation rejects points outside a closed domain") {
    GridSpec g = unit_grid(8, BoundaryKind::zero_gradient);
    ScalarField f(g);
    CHECK_THROWS_AS(interpolate_trilinear(f, {1.5, 0.5, 0.5}), OutOfDomainError);
    // periodic axes wrap instead
    GridSpec gp = unit_grid(8, BoundaryKind::periodic);
    ScalarField fp(gp, 2.0);
    apply_boundary(fp);
    CHECK(interpolate_trilinear(fp, {1.5, 0.5, 0.5}) == Catch::Approx(2.0));
}

TEST_CASE("MAC interpolation recovers staggered linear components") {
    GridSpec g = unit_grid(8, BoundaryKind::zero_gradient);
    MacVelocity vel(g);
    for (int k = -2; k < g.nz + 2; ++k)
        for (int j = -2; j < g.ny + 2; ++j)
            for (int i = -2; i < g.nx + 3; ++i)
                vel.fu(i, j, k) = g.face_center(0, i, j, k).x;
    Vec3 v = interpolate_trilinear(vel, Vec3{0.43, 0.5, 0.5});
    CHECK(v.x == Catch::Approx(0.43).margin(1e-14));
}

TEST_CASE("apply_boundary: periodic copy, zero-gradient copy, fixed-value mirror") {
    GridSpec g = unit_grid(8, BoundaryKind::periodic);
    ScalarField f(g);
    for_cells_serial(g, [&](int i, int j, int k) { f(i, j, k) = i + 10.0 * j + 100.0 * k; });
    apply_boundary(f);
    CHECK(f(g.nx, 3, 4) == f(0, 3, 4));
    CHECK(f(-1, 3, 4) == f(g.nx - 1, 3, 4));
    CHECK(f(-2, -1, 4) == f(g.nx - 2, g.ny - 1, 4));  // corner consistency

    GridSpec gz = unit_grid(8, BoundaryKind::zero_gradient);
    ScalarField fz(gz);
    for_cells_serial(gz, [&](int i, int j, int k) { fz(i, j, k) = 2.0 * i; });
    apply_boundary(fz);
    CHECK(fz(-1, 3, 3) == fz(0, 3, 3));
    CHECK(fz(-2, 3, 3) == fz(0, 3, 3));

    GridSpec gf = unit_grid(8, BoundaryKind::fixed_value);
    ScalarField ff(gf, 1.0);
    ScalarBC bc;
    bc.fixed[XLo] = 4.0;
    apply_boundary(ff, &bc);
    CHECK(ff(-1, 3, 3) == Catch::Approx(2.0 * 4.0 - 1.0));
}

TEST_CASE("apply_boundary pins wall-normal velocity faces to zero") {
    GridSpec g = unit_grid(8, BoundaryKind::no_slip_wall);
    MacVelocity vel(g, {1.0, 1.0, 1.0});
    apply_boundary(vel);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            CHECK(vel.fw(i, j, 0) == 0.0);
            CHECK(vel.fw(i, j, g.nz) == 0.0);
        }
    // tangential ghost mirrors about the wall value (0 here)
    CHECK(vel.fu(3, 3, -1) == Catch::Approx(-vel.fu(3, 3, 0)));
}

TEST_CASE("moving-wall tangential boundary reflects about the wall speed") {
    GridSpec g = unit_grid(8, BoundaryKind::periodic);
    g.bc[ZLo] = g.bc[ZHi] = BoundaryKind::no_slip_wall;
    MacVelocity vel(g);
    VelocityBC bc;
    bc.wall_velocity[ZHi] = {2.0, 0.0, 0.0};
    apply_boundary(vel, &bc);
    CHECK(vel.fu(3, 3, g.nz) == Catch::Approx(2.0 * 2.0 - vel.fu(3, 3, g.nz - 1)));
}

TEST_CASE("divergence: uniform flow, linear expansion, and solenoidal shear") {
    GridSpec g = unit_grid(8, BoundaryKind::zero_gradient);

    MacVelocity uni(g, {0.7, -0.3, 0.1});
    ScalarField d0 = divergence(uni);
    CHECK(max_abs_interior(d0) < 1e-14);

    MacVelocity lin(g);
    for (int k = -2; k < g.nz + 2; ++k)
        for (int j = -2; j < g.ny + 2; ++j) {
            for (int i = -2; i < g.nx + 3; ++i) lin.fu(i, j, k) = g.face_center(0, i, j, k).x;
        }
    ScalarField d1 = divergence(lin);
    for_cells_serial(g, [&](int i, int j, int k) {
        CHECK(d1(i, j, k) == Catch::Approx(1.0).margin(1e-12));
    });

    MacVelocity shear(g);
    for (int k = -2; k < g.nz + 2; ++k) {
        for (int j = -2; j < g.ny + 2; ++j)
            for (int i = -2; i < g.nx + 3; ++i) shear.fu(i, j, k) = g.face_center(0, i, j, k).x;
        for (int j = -2; j < g.ny + 3; ++j)
            for (int i = -2; i < g.nx + 2; ++i) shear.fv(i, j, k) = -g.face_center(1, i, j, k).y;
    }
    ScalarField d2 = divergence(shear);
    CHECK(max_abs_interior(d2) < 1e-12);
}

TEST_CASE("eno2_advect: identity cases and exact linear transport") {
    GridSpec g = unit_grid(8, BoundaryKind::zero_gradient);

    ScalarField c(g, 2.5);
    apply_boundary(c);
    MacVelocity vel(g, {0.9, -0.4, 0.2});
    ScalarField adv = eno2_advect(c, vel, 0.05);
    for_cells_serial(g, [&](int i, int j, int k) {
        CHECK(adv(i, j, k) == Catch::Approx(2.5).margin(1e-14));
    });

    ScalarField fx(g);
    fill_from(fx, [](Vec3 p) { return p.x; });
    MacVelocity u1(g, {1.0, 0.0, 0.0});
    double dt = 0.05;
    ScalarField moved = eno2_advect(fx, u1, dt);
    // interior cells away from the boundary see the exact shift f - dt
    for (int k = 2; k < g.nz - 2; ++k)
        for (int j = 2; j < g.ny - 2; ++j)
            for (int i = 2; i < g.nx - 2; ++i)
                CHECK(moved(i, j, k) ==
                      Catch::Approx(g.cell_center(i, j, k).x - dt).margin(1e-13));

    MacVelocity zero(g);
    ScalarField same = eno2_advect(fx, zero, 0.1);
    for_cells_serial(g, [&](int i, int j, int k) {
        CHECK(same(i, j, k) == fx(i, j, k));
    });
}

TEST_CASE("eno2_advect rejects CFL violations") {
    GridSpec g = unit_grid(8, BoundaryKind::periodic);
    ScalarField f(g, 1.0);
    apply_boundary(f);
    MacVelocity vel(g, {4.0, 0.0, 0.0});
    CHECK_THROWS_AS(eno2_advect(f, vel, 1.0), CflError);
}

TEST_CASE("eno2_advect converges at order >= 1.5 on a sine profile") {
    const double T = 0.5;
    auto l1_error = [&](int n) {
        GridSpec g = make_grid(n, n, n, {0.0, 0.0, 0.0}, 2.0 * M_PI / n);
        ScalarField f(g);
        for_cells_serial(g, [&](int i, int j, int k) {
            f(i, j, k) = std::sin(g.cell_center(i, j, k).x);
        });
        apply_boundary(f);
        MacVelocity vel(g, {1.0, 0.0, 0.0});
        double dt = g.hx * g.hx;  // keeps the first-order time error subdominant
        double t = 0.0;
        while (t < T - 1e-12) {
            double step = std::min(dt, T - t);
            f = eno2_advect(f, vel, step);
            t += step;
        }
        double err = 0.0;
        for_cells_serial(g, [&](int i, int j, int k) {
            err += std::abs(f(i, j, k) - std::sin(g.cell_center(i, j, k).x - T));
        });
        return err / (n * double(n) * n);
    };
    double e1 = l1_error(16);
    double e2 = l1_error(32);
    double order = std::log2(e1 / e2);
    INFO("L1(16)=" << e1 << " L1(32)=" << e2 << " order=" << order);
    CHECK(order >= 1.5);
}
