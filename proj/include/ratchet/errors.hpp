#ifndef RATCHET_ERRORS_HPP
#define RATCHET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ratchet {

/// Invalid or inconsistent configuration (bad parameters, malformed config
/// files, refused preconditions). CLI exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical non-convergence. CLI exit code 3.
struct NumericsError : std::runtime_error {
    explicit NumericsError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Persistence-layer failures (checksum mismatch, truncated payload, ...).
/// CLI exit code 4.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ratchet

#endif
