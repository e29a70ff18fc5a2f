#pragma once

#include <stdexcept>
#include <string>

namespace fkv {

/// Argument outside the validity region of an operation.
struct DomainError : std::domain_error {
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A discretization could not meet its stated accuracy contract.
struct ResolutionError : std::runtime_error {
  double achieved;
  ResolutionError(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved(achieved_error) {}
};

/// Assembly inputs are inconsistent (degenerate mesh, mismatched sizes, ...).
struct AssemblyError : std::runtime_error {
  explicit AssemblyError(const std::string& what) : std::runtime_error(what) {}
};

/// A solver or iteration failed to produce a usable result.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Configuration text is malformed or violates an invariant.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fkv
