#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "lcrm/error.hpp"
#include "lcrm/flow.hpp"
#include "lcrm/forces.hpp"
#include "lcrm/grid.hpp"
#include "lcrm/poisson.hpp"
#include "lcrm/surfactant_surface.hpp"

namespace lcrm {

/// Initial interface geometry; the front itself is produced by contouring the
/// matching analytic distance field.
enum class InitShape { sphere, cylinder, none };

struct RunConfig {
    GridSpec grid;

    FlowParams fluids;
    double shear_rate = 0.0;
    bool flow_enabled = true;

    bool has_surfactant = false;
    SurfactantParams surfactant;
    double d_c2 = 0.0;
    double c_init = 0.0;
    double gamma_init = 0.0;
    bool soluble = false;
    bool adsorption_only = false;

    bool has_tension = false;
    TensionParams tension;

    double t_end = 0.0;
    long max_steps = 0;
    int reconstruct_every = 25;
    long output_every = 0;
    long checkpoint_every = 0;
    std::string out_dir = "out";
    PoissonSettings poisson;
    bool deterministic = false;
    int threads = 0;

    InitShape init_shape = InitShape::none;
    Vec3 sphere_center{};
    double sphere_radius = 0.0;
    double cylinder_radius = 0.0;  // interface radius of an axial gas core
};

namespace detail {

struct KeyValue {
    std::string section, key, value;
    int line = 0;
};

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline double to_double(const KeyValue& kv) {
    try {
        size_t pos = 0;
        double v = std::stod(kv.value, &pos);
        if (pos != kv.value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (...) {
        throw ConfigError("config line " + std::to_string(kv.line) + ": value of " +
                          kv.section + "." + kv.key + " is not a number: '" + kv.value +
                          "'");
    }
}

inline long to_long(const KeyValue& kv) {
    try {
        size_t pos = 0;
        long v = std::stol(kv.value, &pos);
        if (pos != kv.value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (...) {
        throw ConfigError("config line " + std::to_string(kv.line) + ": value of " +
                          kv.section + "." + kv.key + " is not an integer: '" + kv.value +
                          "'");
    }
}

inline bool to_bool(const KeyValue& kv) {
    if (kv.value == "true" || kv.value == "1" || kv.value == "yes") return true;
    if (kv.value == "false" || kv.value == "0" || kv.value == "no") return false;
    throw ConfigError("config line " + std::to_string(kv.line) + ": value of " +
                      kv.section + "." + kv.key + " is not a boolean: '" + kv.value + "'");
}

inline BoundaryKind to_bc(const KeyValue& kv) {
    if (kv.value == "periodic") return BoundaryKind::periodic;
    if (kv.value == "no_slip_wall") return BoundaryKind::no_slip_wall;
    if (kv.value == "zero_gradient") return BoundaryKind::zero_gradient;
    if (kv.value == "fixed_value") return BoundaryKind::fixed_value;
    throw ConfigError("config line " + std::to_string(kv.line) + ": unknown boundary kind '" +
                      kv.value + "'");
}

}  // namespace detail

/// Parses the flat `key = value` configuration with [grid] [fluids] [surfactant]
/// [tension] [run] sections. Unknown keys are errors.
inline RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    double lx = 0, ly = 0, lz = 0;
    int nx = 0, ny = 0, nz = 0;
    Vec3 origin{};
    BoundaryKind bcx = BoundaryKind::periodic, bcy = BoundaryKind::periodic,
                 bcz = BoundaryKind::periodic;

    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (size_t c = line.find('#'); c != std::string::npos) line.resize(c);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": malformed section header");
            section = line.substr(1, line.size() - 2);
            if (section != "grid" && section != "fluids" && section != "surfactant" &&
                section != "tension" && section != "run")
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": unknown section [" + section + "]");
            if (section == "surfactant") cfg.has_surfactant = true;
            if (section == "tension") cfg.has_tension = true;
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        detail::KeyValue kv{section, detail::trim(line.substr(0, eq)),
                            detail::trim(line.substr(eq + 1)), lineno};
        if (kv.key.empty() || kv.value.empty())
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");

        auto unknown = [&]() -> ConfigError {
            return ConfigError("config line " + std::to_string(lineno) + ": unknown key " +
                               (section.empty() ? kv.key : section + "." + kv.key));
        };

        if (section == "grid") {
            if (kv.key == "nx") nx = static_cast<int>(detail::to_long(kv));
            else if (kv.key == "ny") ny = static_cast<int>(detail::to_long(kv));
            else if (kv.key == "nz") nz = static_cast<int>(detail::to_long(kv));
            else if (kv.key == "lx") lx = detail::to_double(kv);
            else if (kv.key == "ly") ly = detail::to_double(kv);
            else if (kv.key == "lz") lz = detail::to_double(kv);
            else if (kv.key == "origin_x") origin.x = detail::to_double(kv);
            else if (kv.key == "origin_y") origin.y = detail::to_double(kv);
            else if (kv.key == "origin_z") origin.z = detail::to_double(kv);
            else if (kv.key == "bc_x") bcx = detail::to_bc(kv);
            else if (kv.key == "bc_y") bcy = detail::to_bc(kv);
            else if (kv.key == "bc_z") bcz = detail::to_bc(kv);
            else throw unknown();
        } else if (section == "fluids") {
            if (kv.key == "rho1") cfg.fluids.rho1 = detail::to_double(kv);
            else if (kv.key == "rho2") cfg.fluids.rho2 = detail::to_double(kv);
            else if (kv.key == "mu1") cfg.fluids.mu1 = detail::to_double(kv);
            else if (kv.key == "mu2") cfg.fluids.mu2 = detail::to_double(kv);
            else if (kv.key == "gravity_x") cfg.fluids.gravity.x = detail::to_double(kv);
            else if (kv.key == "gravity_y") cfg.fluids.gravity.y = detail::to_double(kv);
            else if (kv.key == "gravity_z") cfg.fluids.gravity.z = detail::to_double(kv);
            else if (kv.key == "body_force1_x") cfg.fluids.body_force1.x = detail::to_double(kv);
            else if (kv.key == "body_force1_y") cfg.fluids.body_force1.y = detail::to_double(kv);
            else if (kv.key == "body_force1_z") cfg.fluids.body_force1.z = detail::to_double(kv);
            else if (kv.key == "body_force2_x") cfg.fluids.body_force2.x = detail::to_double(kv);
            else if (kv.key == "body_force2_y") cfg.fluids.body_force2.y = detail::to_double(kv);
            else if (kv.key == "body_force2_z") cfg.fluids.body_force2.z = detail::to_double(kv);
            else if (kv.key == "shear_rate") cfg.shear_rate = detail::to_double(kv);
            else throw unknown();
        } else if (section == "surfactant") {
            if (kv.key == "d_s") cfg.surfactant.d_s = detail::to_double(kv);
            else if (kv.key == "gamma_inf") cfg.surfactant.gamma_inf = detail::to_double(kv);
            else if (kv.key == "k_a") cfg.surfactant.k_a = detail::to_double(kv);
            else if (kv.key == "k_d") cfg.surfactant.k_d = detail::to_double(kv);
            else if (kv.key == "d_c2") cfg.d_c2 = detail::to_double(kv);
            else if (kv.key == "c_init") cfg.c_init = detail::to_double(kv);
            else if (kv.key == "gamma_init") cfg.gamma_init = detail::to_double(kv);
            else if (kv.key == "soluble") cfg.soluble = detail::to_bool(kv);
            else if (kv.key == "adsorption_only") cfg.adsorption_only = detail::to_bool(kv);
            else throw unknown();
        } else if (section == "tension") {
            if (kv.key == "sigma_s") cfg.tension.sigma_s = detail::to_double(kv);
            else if (kv.key == "beta_s") cfg.tension.beta_s = detail::to_double(kv);
            else if (kv.key == "eos") {
                if (kv.value == "langmuir") cfg.tension.eos_kind = EosKind::langmuir;
                else if (kv.value == "linear") cfg.tension.eos_kind = EosKind::linear;
                else throw ConfigError("config line " + std::to_string(lineno) +
                                       ": eos must be langmuir or linear");
            } else throw unknown();
        } else if (section == "run") {
            if (kv.key == "t_end") cfg.t_end = detail::to_double(kv);
            else if (kv.key == "max_steps") cfg.max_steps = detail::to_long(kv);
            else if (kv.key == "reconstruct_every") cfg.reconstruct_every =
                static_cast<int>(detail::to_long(kv));
            else if (kv.key == "output_every") cfg.output_every = detail::to_long(kv);
            else if (kv.key == "checkpoint_every") cfg.checkpoint_every = detail::to_long(kv);
            else if (kv.key == "out_dir") cfg.out_dir = kv.value;
            else if (kv.key == "poisson_tol") cfg.poisson.tolerance = detail::to_double(kv);
            else if (kv.key == "poisson_max_iter") cfg.poisson.max_iterations =
                static_cast<int>(detail::to_long(kv));
            else if (kv.key == "deterministic") cfg.deterministic = detail::to_bool(kv);
            else if (kv.key == "threads") cfg.threads = static_cast<int>(detail::to_long(kv));
            else if (kv.key == "flow") cfg.flow_enabled = detail::to_bool(kv);
            else if (kv.key == "init") {
                if (kv.value == "sphere") cfg.init_shape = InitShape::sphere;
                else if (kv.value == "cylinder") cfg.init_shape = InitShape::cylinder;
                else throw ConfigError("config line " + std::to_string(lineno) +
                                       ": init must be sphere or cylinder");
            }
            else if (kv.key == "sphere_x") cfg.sphere_center.x = detail::to_double(kv);
            else if (kv.key == "sphere_y") cfg.sphere_center.y = detail::to_double(kv);
            else if (kv.key == "sphere_z") cfg.sphere_center.z = detail::to_double(kv);
            else if (kv.key == "sphere_r") cfg.sphere_radius = detail::to_double(kv);
            else if (kv.key == "cylinder_r") cfg.cylinder_radius = detail::to_double(kv);
            else throw unknown();
        } else {
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": key outside any section: " + kv.key);
        }
    }

    if (nx <= 0 || ny <= 0 || nz <= 0 || lx <= 0 || ly <= 0 || lz <= 0)
        throw ConfigError("config: [grid] must set nx, ny, nz, lx, ly, lz");
    cfg.grid.nx = nx;
    cfg.grid.ny = ny;
    cfg.grid.nz = nz;
    cfg.grid.hx = lx / nx;
    cfg.grid.hy = ly / ny;
    cfg.grid.hz = lz / nz;
    cfg.grid.origin = origin;
    cfg.grid.bc = {bcx, bcx, bcy, bcy, bcz, bcz};
    cfg.grid.validate();
    if (cfg.flow_enabled) cfg.fluids.validate();
    cfg.poisson.validate();
    if (cfg.t_end <= 0.0 && cfg.max_steps <= 0)
        throw ConfigError("config: [run] must set t_end or max_steps");
    if (cfg.init_shape == InitShape::sphere && cfg.sphere_radius <= 0.0)
        throw ConfigError("config: sphere init needs sphere_r > 0");
    if (cfg.init_shape == InitShape::cylinder && cfg.cylinder_radius <= 0.0)
        throw ConfigError("config: cylinder init needs cylinder_r > 0");
    if (cfg.has_tension && cfg.tension.sigma_s <= 0.0)
        throw ConfigError("config: [tension] sigma_s must be positive");
    return cfg;
}

inline RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace lcrm
