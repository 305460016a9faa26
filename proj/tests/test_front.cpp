#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "lcrm/front.hpp"
#include "test_util.hpp"

using namespace lcrm;
using lcrm::test::fill_scalar;
using lcrm::test::fill_velocity;
using lcrm::test::make_sphere_soup;

namespace {

GridSpec box_grid(int n, double len, Vec3 origin = {0, 0, 0},
                  BoundaryKind kind = BoundaryKind::zero_gradient) {
    return make_grid(n, n, n, origin, len / n, kind);
}

ScalarField planar_phi(const GridSpec& g) {
    ScalarField phi(g);
    fill_scalar(phi, [](Vec3 p) { return p.z; });
    return phi;
}

}  // namespace

TEST_CASE("element_frame: area and normal of canonical triangles") {
    GridSpec g = box_grid(8, 4.0, {-2, -2, -2});
    ScalarField phi = planar_phi(g);
    double eps = geometry_epsilon(g.hx);

    FrontElement right{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, 0.0, 0.0};
    ElementFrame fr = element_frame(right, phi, eps);
    CHECK(fr.area == Catch::Approx(0.5));
    CHECK(fr.normal.z == Catch::Approx(1.0));

    FrontElement big{{0, 0, 0}, {2, 0, 0}, {0, 2, 0}, 0.0, 0.0};
    ElementFrame fb = element_frame(big, phi, eps);
    CHECK(fb.area == Catch::Approx(2.0));
    CHECK(fb.normal.z == Catch::Approx(1.0));

    FrontElement collinear{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, 0.0, 0.0};
    CHECK_THROWS_AS(element_frame(collinear, phi, eps), GeometryError);
}

TEST_CASE("element_frame conormals are unit, outward, and close the boundary") {
    GridSpec g = box_grid(8, 4.0, {-2, -2, -2});
    ScalarField phi = planar_phi(g);
    double eps = geometry_epsilon(g.hx);

    FrontElement e{{0.1, -0.2, 0}, {1.2, 0.3, 0}, {0.4, 1.1, 0}, 0.0, 0.0};
    ElementFrame fr = element_frame(e, phi, eps);
    Vec3 centroid = element_centroid(e);
    Vec3 tsum{};
    for (int k = 0; k < 3; ++k) {
        CHECK(norm(fr.tangent[k]) == Catch::Approx(1.0));
        CHECK(norm(fr.binormal_p[k]) == Catch::Approx(1.0));
        CHECK(norm(fr.binormal_pp[k]) == Catch::Approx(1.0));
        // p' must lie in the element plane, perpendicular to the edge
        CHECK(std::abs(dot(fr.binormal_pp[k], fr.normal)) < 1e-12);
        CHECK(std::abs(dot(fr.binormal_pp[k], fr.tangent[k])) < 1e-12);
        // outward: away from the centroid
        CHECK(dot(fr.binormal_pp[k], fr.edge_mid[k] - centroid) > 0.0);
        tsum += fr.tangent[k] * fr.edge_len[k];
    }
    CHECK(norm(tsum) < 1e-12);  // closed triangle boundary
}

TEST_CASE("element_frame edge normals follow the distance field") {
    // phi for a sphere: edge-midpoint normals should be radial
    GridSpec g = box_grid(32, 2.5, {-1.25, -1.25, -1.25});
    ScalarField phi(g);
    fill_scalar(phi, [](Vec3 p) { return lcrm::test::signed_sphere_phi(p, {0, 0, 0}, 0.5); });
    FrontMesh mesh = make_sphere_soup({0, 0, 0}, 0.5, 16);
    double eps = geometry_epsilon(g.hx);
    for (size_t i = 0; i < mesh.elements.size(); i += 17) {
        ElementFrame fr = element_frame(mesh.elements[i], phi, eps);
        for (int k = 0; k < 3; ++k) {
            Vec3 radial = normalized(fr.edge_mid[k]);
            Vec3 n_back = cross(fr.binormal_p[k], fr.tangent[k]);  // recovers n(x)
            CHECK(dot(normalized(n_back), radial) > 0.99);
        }
    }
}

TEST_CASE("advect_front: zero velocity is the identity and snapshots prev_area") {
    GridSpec g = box_grid(8, 4.0, {-2, -2, -2});
    MacVelocity vel(g);
    FrontMesh mesh = make_sphere_soup({0, 0, 0}, 1.0, 8);
    FrontMesh orig = mesh;
    AdvectStats st = advect_front(mesh, vel, 0.1, geometry_epsilon(g.hx));
    CHECK(st.max_speed == 0.0);
    CHECK(st.dropped_elements == 0);
    REQUIRE(mesh.size() == orig.size());
    for (size_t i = 0; i < mesh.size(); ++i) {
        CHECK(norm(mesh.elements[i].v1 - orig.elements[i].v1) == 0.0);
        CHECK(mesh.elements[i].prev_area == Catch::Approx(element_area(mesh.elements[i])));
    }
}

TEST_CASE("advect_front: uniform translation moves vertices and keeps areas") {
    GridSpec g = box_grid(8, 4.0, {-2, -2, -2});
    MacVelocity vel(g, {1.0, 0.0, 0.0});
    FrontMesh mesh = make_sphere_soup({0, 0, 0}, 1.0, 10);
    std::vector<double> areas;
    for (auto& e : mesh.elements) areas.push_back(element_area(e));
    std::vector<Vec3> v1s;
    for (auto& e : mesh.elements) v1s.push_back(e.v1);
    double mass0 = surface_mass(mesh);
    advect_front(mesh, vel, 0.1, geometry_epsilon(g.hx));
    for (size_t i = 0; i < mesh.size(); ++i) {
        CHECK(mesh.elements[i].v1.x == Catch::Approx(v1s[i].x + 0.1).margin(1e-14));
        CHECK(mesh.elements[i].v1.y == Catch::Approx(v1s[i].y).margin(1e-14));
        CHECK(element_area(mesh.elements[i]) == Catch::Approx(areas[i]).epsilon(1e-13));
    }
    CHECK(surface_mass(mesh) == Catch::Approx(mass0).epsilon(1e-13));
}

TEST_CASE("advect_front: radial expansion grows radii by v*dt") {
    GridSpec g = box_grid(32, 2.5, {-1.25, -1.25, -1.25});
    MacVelocity vel(g);
    fill_velocity(vel, [](Vec3 p) {
        double r = norm(p);
        return r > 1e-9 ? p * (0.01 / r) : Vec3{};
    });
    FrontMesh mesh = make_sphere_soup({0, 0, 0}, 0.5, 16);
    advect_front(mesh, vel, 1.0, geometry_epsilon(g.hx));
    for (size_t i = 0; i < mesh.size(); i += 13) {
        CHECK(norm(mesh.elements[i].v1) == Catch::Approx(0.51).margin(1e-3));
    }
}

TEST_CASE("advect_front: rigid rotation preserves element areas and mass") {
    GridSpec g = box_grid(16, 4.0, {-2, -2, -2});
    MacVelocity vel(g);
    fill_velocity(vel, [](Vec3 p) { return cross(Vec3{0, 0, 1.0}, p); });
    FrontMesh mesh = make_sphere_soup({0, 0, 0}, 0.8, 12);
    for (auto& e : mesh.elements) e.gamma = 1.0 + 0.3 * e.v1.z;
    std::vector<double> areas;
    for (auto& e : mesh.elements) areas.push_back(element_area(e));
    double mass0 = surface_mass(mesh);
    double dt = 1e-3;
    for (int s = 0; s < 20; ++s) advect_front(mesh, vel, dt, geometry_epsilon(g.hx));
    for (size_t i = 0; i < mesh.size(); i += 7) {
        CHECK(element_area(mesh.elements[i]) == Catch::Approx(areas[i]).epsilon(1e-8));
    }
    CHECK(surface_mass(mesh) == Catch::Approx(mass0).epsilon(1e-8));
}

TEST_CASE("advect_front clamps vertices leaving a closed domain") {
    GridSpec g = box_grid(8, 4.0, {-2, -2, -2});
    MacVelocity vel(g, {0.0, 0.0, 0.3});
    FrontMesh mesh;
    mesh.elements.push_back({{0, 0, 1.99}, {0.2, 0, 1.99}, {0, 0.2, 1.99}, 0.0, 0.0});
    AdvectStats st = advect_front(mesh, vel, 0.5, geometry_epsilon(g.hx));
    CHECK(st.clamped_vertices > 0);
    CHECK(mesh.elements[0].v1.z <= 2.0);
}

TEST_CASE("area_ratio follows the square of the linear scale factor") {
    FrontElement e{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, 0.0, 0.5};
    double eps = geometry_epsilon(0.01);
    CHECK(area_ratio(e, eps) == Catch::Approx(1.0));

    FrontElement stretched{{0, 0, 0}, {1.5, 0, 0}, {0, 1.5, 0}, 0.0, 0.5};
    CHECK(area_ratio(stretched, eps) == Catch::Approx(1.0 / 2.25));

    FrontElement shrunk{{0, 0, 0}, {0.5, 0, 0}, {0, 0.5, 0}, 0.0, 0.5};
    CHECK(area_ratio(shrunk, eps) == Catch::Approx(4.0));

    FrontElement degen{{0, 0, 0}, {1e-9, 0, 0}, {0, 1e-9, 0}, 0.0, 0.5};
    CHECK_THROWS_AS(area_ratio(degen, eps), GeometryError);
}

TEST_CASE("triangulated sphere area converges to 4 pi R^2 at second order") {
    double R = 0.5;
    double exact = 4.0 * M_PI * R * R;
    double e1 = std::abs(total_area(make_sphere_soup({0, 0, 0}, R, 16)) - exact);
    double e2 = std::abs(total_area(make_sphere_soup({0, 0, 0}, R, 32)) - exact);
    INFO("e(16)=" << e1 << " e(32)=" << e2);
    CHECK(e1 / e2 > 3.0);  // O(h^2): refining by 2 should shrink error ~4x
}
