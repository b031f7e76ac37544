#pragma once

#include <stdexcept>
#include <string>

namespace rcv {

/// Malformed or inconsistent input data (profiles, weight files, record files).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid run configuration: unknown keys, bad values, unknown model names.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rcv
