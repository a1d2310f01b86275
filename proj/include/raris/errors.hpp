#pragma once

#include <stdexcept>
#include <string>

namespace raris {

/// Invalid user configuration (bad flag value, violated bound, missing field).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Argument outside the mathematical domain of an operation (e.g. a target mean
/// that no tilt parameter can reach).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A numerical procedure failed to converge or produced a non-finite value.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace raris
