#pragma once

#include <stdexcept>
#include <string>

namespace fluxmaj {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Requested quadrature degree outside the tabulated range.
class UnsupportedDegree : public Error {
 public:
  using Error::Error;
};

/// Coefficient matrix is singular or its symmetric part is not positive definite.
class CoefficientInvalid : public Error {
 public:
  using Error::Error;
};

class AssemblyError : public Error {
 public:
  using Error::Error;
};

/// Spaces or vectors that must share a mesh do not.
class Incompatible : public Error {
 public:
  using Error::Error;
};

/// Operation needs data that the problem does not carry (e.g. an exact solution).
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// Iterative solver broke down or ran out of iterations.
class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& what, double residual)
      : Error(what + " (relative residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  [[nodiscard]] double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace fluxmaj
