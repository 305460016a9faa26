#pragma once

#include <stdexcept>
#include <string>

namespace lcrm {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct OutOfDomainError : Error { using Error::Error; };
struct CflError : Error { using Error::Error; };
struct StabilityError : Error { using Error::Error; };
struct GeometryError : Error { using Error::Error; };
struct SolverError : Error { using Error::Error; };
struct SaturationError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace lcrm
