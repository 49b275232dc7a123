#pragma once

#include <stdexcept>
#include <string>

namespace peakon {

/// Strict-ordering violation in a peakon configuration (x_1 < ... < x_N).
class OrderingError : public std::domain_error {
public:
    explicit OrderingError(const std::string& what) : std::domain_error(what) {}
};

/// Malformed configuration: bad scenario file, invalid SimConfig, bad spec values.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Time stepping failure (step size too large, event not bracketable).
class IntegratorError : public std::runtime_error {
public:
    explicit IntegratorError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace peakon
