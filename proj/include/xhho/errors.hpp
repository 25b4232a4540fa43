#pragma once

#include <stdexcept>
#include <string>

namespace xhho {

/// Mesh file could not be parsed; carries the 1-based line number.
class MeshFormatError : public std::runtime_error {
public:
  MeshFormatError(int line, const std::string& what)
      : std::runtime_error("mesh format error at line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

/// Mesh connectivity is invalid (face shared by >2 elements, open polygon, ...).
class TopologyError : public std::runtime_error {
public:
  explicit TopologyError(const std::string& what) : std::runtime_error("topology error: " + what) {}
};

/// A local basis could not be orthonormalised: the raw mass matrix is
/// numerically singular. Carries the offending owner id and its raw
/// condition number so drivers can report which element broke.
class ConditioningError : public std::runtime_error {
public:
  ConditioningError(int owner, double raw_condition, const std::string& what)
      : std::runtime_error(what), owner_(owner), raw_condition_(raw_condition) {}
  int owner() const { return owner_; }
  double raw_condition() const { return raw_condition_; }

private:
  int owner_;
  double raw_condition_;
};

/// Global or local linear solve failed.
class SolverError : public std::runtime_error {
public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Adaptive quadrature did not reach the requested tolerance.
class QuadratureError : public std::runtime_error {
public:
  QuadratureError(double achieved, const std::string& what)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved_tolerance() const { return achieved_; }

private:
  double achieved_;
};

/// Bad run configuration (CLI or config file).
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace xhho
