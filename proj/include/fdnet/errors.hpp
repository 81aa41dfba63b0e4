#pragma once

#include <stdexcept>
#include <string>

namespace fdnet {

// Invalid parameters or configuration. Maps to CLI exit code 1.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Quadrature or root-finding failed to converge. Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Degenerate geometry, e.g. a receiver sitting on a transmitter under plain path loss.
class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool cond, const std::string& what) {
    if (!cond) throw ConfigError(what);
}

} // namespace detail
} // namespace fdnet
