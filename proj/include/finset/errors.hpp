#pragma once

#include <stdexcept>
#include <string>

namespace finset {

// Bad configuration (invalid patterns, inconsistent thresholds, unknown keys).
// Maps to exit/status code 2 at the process boundary.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Bad input data or I/O failure. Maps to exit/status code 1.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace finset
