#ifndef CCLAB_ERRORS_HPP
#define CCLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cclab {

/// Invalid user-supplied configuration (bad grid sizes, odd periodic counts, ...).
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Evaluation outside the admissible domain (pole touching, degree overflow, ...).
class DomainError : public std::runtime_error {
public:
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Mismatched grids or incompatible field shapes.
class ShapeError : public std::runtime_error {
public:
  explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace cclab

#endif
