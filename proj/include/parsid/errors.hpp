#ifndef PARSID_ERRORS_HPP_
#define PARSID_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace parsid {

// Bad user-facing configuration (CLI exit code 1).
class ConfigError : public std::invalid_argument {
 public:
    explicit ConfigError(const std::string& msg) : std::invalid_argument(msg) {}
};

// The constraint set admits no point within tolerance (CLI exit code 2).
class InfeasibleError : public std::runtime_error {
 public:
    explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

// File system / parse failures (CLI exit code 3).
class IoError : public std::runtime_error {
 public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace parsid

#endif  // PARSID_ERRORS_HPP_
