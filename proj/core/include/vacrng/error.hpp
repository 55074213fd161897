#pragma once

#include <stdexcept>
#include <string>

namespace vacrng {

/// Invalid parameters or configuration (bad sizes, out-of-range rates, malformed descriptors).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// The data itself is unusable: too short, inconsistent metadata, non-finite samples,
/// a calibration whose quantum variance is not positive.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// An extraction would emit more bits than the conditional min-entropy allows.
class EntropySafetyError : public std::runtime_error {
public:
    explicit EntropySafetyError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace vacrng
