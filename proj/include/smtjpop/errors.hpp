#pragma once

#include <stdexcept>
#include <string>

namespace smtjpop {

/// Bad user input: malformed config, out-of-range parameter, unknown key.
/// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Runtime failure inside a simulation or solve (singular system, rate not
/// representable, fit did not converge). The CLI maps this to exit code 3.
class SimulationError : public std::runtime_error {
public:
    explicit SimulationError(const std::string& what)
        : std::runtime_error(what) {}
};

}  // namespace smtjpop
