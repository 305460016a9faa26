#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "lcrm/error.hpp"
#include "lcrm/field.hpp"
#include "lcrm/front.hpp"

namespace lcrm {

/// Legacy-VTK structured-points text output of a cell-centered scalar.
inline void write_vtk_scalar(const ScalarField& f, const std::string& path,
                             const std::string& name) {
    const GridSpec& g = f.grid;
    std::ofstream out(path);
    if (!out) throw IoError("write_vtk_scalar: cannot open " + path);
    out << "# vtk DataFile Version 3.0\n" << name << "\nASCII\n";
    out << "DATASET STRUCTURED_POINTS\n";
    out << "DIMENSIONS " << g.nx << " " << g.ny << " " << g.nz << "\n";
    out << "ORIGIN " << g.origin.x + 0.5 * g.hx << " " << g.origin.y + 0.5 * g.hy << " "
        << g.origin.z + 0.5 * g.hz << "\n";
    out << "SPACING " << g.hx << " " << g.hy << " " << g.hz << "\n";
    out << "POINT_DATA " << static_cast<long long>(g.nx) * g.ny * g.nz << "\n";
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    char buf[64];
    for (int k = 0; k < g.nz; ++k)
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                std::snprintf(buf, sizeof buf, "%.10g\n", f(i, j, k));
                out << buf;
            }
}

/// Legacy-VTK vector output of a MAC velocity interpolated to cell centers.
inline void write_vtk_velocity(const MacVelocity& vel, const std::string& path,
                               const std::string& name = "velocity") {
    const GridSpec& g = vel.grid;
    std::ofstream out(path);
    if (!out) throw IoError("write_vtk_velocity: cannot open " + path);
    out << "# vtk DataFile Version 3.0\n" << name << "\nASCII\n";
    out << "DATASET STRUCTURED_POINTS\n";
    out << "DIMENSIONS " << g.nx << " " << g.ny << " " << g.nz << "\n";
    out << "ORIGIN " << g.origin.x + 0.5 * g.hx << " " << g.origin.y + 0.5 * g.hy << " "
        << g.origin.z + 0.5 * g.hz << "\n";
    out << "SPACING " << g.hx << " " << g.hy << " " << g.hz << "\n";
    out << "POINT_DATA " << static_cast<long long>(g.nx) * g.ny * g.nz << "\n";
    out << "VECTORS " << name << " double\n";
    char buf[128];
    for (int k = 0; k < g.nz; ++k)
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                double uc = 0.5 * (vel.fu(i, j, k) + vel.fu(i + 1, j, k));
                double vc = 0.5 * (vel.fv(i, j, k) + vel.fv(i, j + 1, k));
                double wc = 0.5 * (vel.fw(i, j, k) + vel.fw(i, j, k + 1));
                std::snprintf(buf, sizeof buf, "%.10g %.10g %.10g\n", uc, vc, wc);
                out << buf;
            }
}

/// Triangle-soup OBJ (three unique vertices per face) plus a sidecar CSV with
/// element id, gamma, and area.
inline void write_front_obj(const FrontMesh& mesh, const std::string& obj_path,
                            const std::string& csv_path) {
    std::ofstream obj(obj_path);
    if (!obj) throw IoError("write_front_obj: cannot open " + obj_path);
    char buf[160];
    for (const FrontElement& e : mesh.elements)
        for (const Vec3& v : {e.v1, e.v2, e.v3}) {
            std::snprintf(buf, sizeof buf, "v %.12g %.12g %.12g\n", v.x, v.y, v.z);
            obj << buf;
        }
    for (size_t i = 0; i < mesh.size(); ++i)
        obj << "f " << 3 * i + 1 << " " << 3 * i + 2 << " " << 3 * i + 3 << "\n";

    std::ofstream csv(csv_path);
    if (!csv) throw IoError("write_front_obj: cannot open " + csv_path);
    csv << "element_id,gamma,area\n";
    for (size_t i = 0; i < mesh.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.12g,%.12g\n", i, mesh.elements[i].gamma,
                      element_area(mesh.elements[i]));
        csv << buf;
    }
}

inline void ensure_directory(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

}  // namespace lcrm
