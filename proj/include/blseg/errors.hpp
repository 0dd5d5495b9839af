#ifndef BLSEG_ERRORS_HPP
#define BLSEG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace blseg {

// One exception type per contract violation named in the module interfaces.

struct ShapeError : std::runtime_error {
    explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

struct FormatError : std::runtime_error {
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidThreshold : std::invalid_argument {
    explicit InvalidThreshold(const std::string& msg) : std::invalid_argument(msg) {}
};

struct EmptyFeatureSet : std::runtime_error {
    explicit EmptyFeatureSet(const std::string& msg) : std::runtime_error(msg) {}
};

struct NoIntersection : std::runtime_error {
    explicit NoIntersection(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidSchedule : std::invalid_argument {
    explicit InvalidSchedule(const std::string& msg) : std::invalid_argument(msg) {}
};

struct NonFiniteGradient : std::runtime_error {
    explicit NonFiniteGradient(const std::string& msg) : std::runtime_error(msg) {}
};

struct CacheError : std::runtime_error {
    explicit CacheError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace blseg

#endif // BLSEG_ERRORS_HPP
