#pragma once

#include <stdexcept>
#include <string>

namespace shiftframe {

/// Base class for all domain errors thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input contains NaN or Inf entries.
class NonFiniteError : public Error {
 public:
  explicit NonFiniteError(const std::string& what) : Error(what) {}
};

/// Matrix failed the normality residual gate.
class NotNormalError : public Error {
 public:
  explicit NotNormalError(const std::string& what) : Error(what) {}
};

/// Two fields were combined that live on different grids or windows.
class GridMismatchError : public Error {
 public:
  explicit GridMismatchError(const std::string& what) : Error(what) {}
};

/// A vector that was required to lie in a subspace does not.
class VectorOutsideSubspaceError : public Error {
 public:
  explicit VectorOutsideSubspaceError(const std::string& what) : Error(what) {}
};

/// Frame bound arguments violate 0 < A <= B (or analogous constraints).
class InvalidBoundsError : public Error {
 public:
  explicit InvalidBoundsError(const std::string& what) : Error(what) {}
};

/// Two eigenvalues that must be distinct coincide within tolerance.
class DegenerateEigenvaluesError : public Error {
 public:
  explicit DegenerateEigenvaluesError(const std::string& what) : Error(what) {}
};

/// Eigenvalue clusters sit too close to the merge threshold to be trusted.
class DegenerateClusteringError : public Error {
 public:
  explicit DegenerateClusteringError(const std::string& what) : Error(what) {}
};

/// An instance recipe cannot be realized (e.g. more eigenvalue fields than
/// the rank of the generated range function).
class InfeasibleSpecError : public Error {
 public:
  explicit InfeasibleSpecError(const std::string& what) : Error(what) {}
};

/// Measured spectral gap is below the requested minimum.
class NoSpectralGapError : public Error {
 public:
  explicit NoSpectralGapError(const std::string& what) : Error(what) {}
};

/// Malformed input document (JSON shape, missing fields, bad values).
class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& what) : Error(what) {}
};

}  // namespace shiftframe
