#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace hpca {

/// Base for every error raised by the library. `module()` names the
/// component that detected the problem so callers can surface provenance.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& message)
      : std::runtime_error("[" + module + "] " + message),
        module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// Bad input: malformed files, missing labels, out-of-range parameters.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The numerics failed: solver non-convergence, indefinite matrices,
/// singular systems.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace hpca
