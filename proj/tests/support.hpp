#pragma once

#include <cmath>
#include <vector>

#include "shiftframe/fiber_field.hpp"
#include "shiftframe/generate.hpp"
#include "shiftframe/linalg.hpp"
#include "shiftframe/rng.hpp"
#include "shiftframe/types.hpp"

namespace shiftframe::test {

inline bool close(double a, double b, double tol = 1e-12) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

inline bool close(const Complex& a, const Complex& b, double tol = 1e-12) {
  return std::abs(a - b) <= tol;
}

inline ComplexMatrix random_normal_matrix(int n, Pcg32& rng,
                                          double min_sep = 0.1) {
  std::vector<Complex> values;
  for (int s = 0; s < n; ++s) {
    for (;;) {
      Complex candidate(rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2));
      bool ok = true;
      for (const Complex& other : values) {
        if (std::abs(candidate - other) < min_sep) ok = false;
      }
      if (ok) {
        values.push_back(candidate);
        break;
      }
    }
  }
  ComplexMatrix diag = ComplexMatrix::Zero(n, n);
  for (int s = 0; s < n; ++s) diag(s, s) = values[s];
  ComplexMatrix q = random_unitary(n, rng);
  return q * diag * q.adjoint();
}

inline ComplexMatrix random_hermitian_matrix(int n, Pcg32& rng) {
  ComplexMatrix m(n, n);
  for (int col = 0; col < n; ++col) {
    for (int row = 0; row < n; ++row) m(row, col) = rng.complex_gaussian();
  }
  return ComplexMatrix((m + m.adjoint()) / 2.0);
}

// Constant-in-omega field on the given layout.
inline FiberField constant_field(const OmegaGrid& grid,
                                 const FiberWindow& window,
                                 const ComplexVector& fiber) {
  FiberField f;
  f.grid = grid;
  f.window = window;
  f.values.assign(grid.size(), fiber);
  return f;
}

inline ComplexVector unit_coordinate(int n, int index) {
  ComplexVector v = ComplexVector::Zero(n);
  v(index) = 1.0;
  return v;
}

}  // namespace shiftframe::test
