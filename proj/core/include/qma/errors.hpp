#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qma {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Eigenvalues of iota(U) do not split into quadruples: the input is not
// hyperhermitian within tolerance.
struct DegenerateSpectrum : Error {
  explicit DegenerateSpectrum(const std::string& what) : Error(what) {}
};

struct SingularMatrix : Error {
  explicit SingularMatrix(const std::string& what) : Error(what) {}
};

struct GridTooSmall : Error {
  explicit GridTooSmall(const std::string& what) : Error(what) {}
};

struct NotQReal : Error {
  explicit NotQReal(const std::string& what) : Error(what) {}
};

struct CalibrationMismatch : Error {
  explicit CalibrationMismatch(const std::string& what) : Error(what) {}
};

struct SingularG : Error {
  explicit SingularG(const std::string& what) : Error(what) {}
};

struct NotDiagonalAtP : Error {
  explicit NotDiagonalAtP(const std::string& what) : Error(what) {}
};

struct NotPositive : Error {
  explicit NotPositive(const std::string& what) : Error(what) {}
};

// A grid point where Id + kappa*Hess_H(phi) dropped below the positivity
// margin. `point` is the flat row-major index.
struct PositivityLost : Error {
  std::size_t point;
  double min_eigenvalue;
  PositivityLost(std::size_t pt, double eig)
      : Error("positivity lost at point " + std::to_string(pt) +
              ", min eigenvalue " + std::to_string(eig)),
        point(pt),
        min_eigenvalue(eig) {}
};

struct StepFailure : Error {
  std::size_t point;
  double min_eigenvalue;
  StepFailure(std::size_t pt, double eig)
      : Error("time step failed after maximum halvings; offending point " +
              std::to_string(pt) + ", min eigenvalue " + std::to_string(eig)),
        point(pt),
        min_eigenvalue(eig) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(what) {}
};

struct ConfigHashMismatch : Error {
  explicit ConfigHashMismatch(const std::string& what) : Error(what) {}
};

}  // namespace qma
