#pragma once

#include <cmath>
#include <vector>

#include "shiftframe/range_operator.hpp"

namespace shiftframe {

/// The canonical s-diagonalization of a normal range operator field.
///
/// At each grid point the distinct eigenvalues of the restricted operator
/// are ordered by the fixed total order on C (descending modulus, ties by
/// ascending argument). The s-th eigenvalue field carries that value where
/// at least s distinct eigenvalues exist, and the padding value K + s
/// elsewhere, with K = op_norm + 1 strictly above every true eigenvalue
/// modulus. Spectra are nested by construction and the partition piece B_h
/// collects the points with exactly h distinct eigenvalues.
struct SDiagonalization {
  OmegaGrid grid;
  FiberWindow window;
  int count = 0;                          // r: max distinct eigenvalues
  std::vector<int> distinct_counts;       // h(omega), 0 off the spectrum
  std::vector<std::vector<Complex>> eigenvalue_fields;  // [s][g], padded
  std::vector<RangeFunctionField> eigenspaces;          // [s]: fiber bases
  std::vector<std::vector<std::size_t>> spectra;        // [s]: h >= s+1
  std::vector<std::vector<std::size_t>> partition;      // [h-1]: h(g) == h
  double padding_constant = 0.0;          // K
  double gap = 0.0;                       // c; +inf when no point has h >= 2

  bool gap_is_sentinel() const { return std::isinf(gap); }
};

/// Requires normality_check to pass. Throws DegenerateClusteringError when
/// two eigenvalue clusters at some point sit within twice the clustering
/// tolerance of each other (the partition would depend on the tolerance in
/// an unstable way).
SDiagonalization s_diagonalize(const RangeOperatorField& rf,
                               double cluster_tol = kDefaultClusterTol,
                               double normality_tol = kDefaultNormalityTol);

struct GapCheck {
  bool pass = false;
  double value = 0.0;
};

/// Measured uniform eigenvalue separation against a required minimum. The
/// sentinel (no point carries two distinct eigenvalues) passes any minimum.
GapCheck spectral_gap(const SDiagonalization& diag, double c_min);

/// max over the grid of || R|_J - sum_s a_s(omega) P_s(omega) ||, the
/// defect of reconstructing the restricted operator from its eigenvalue and
/// projection fields.
double spectral_reconstruction_residual(const RangeOperatorField& rf,
                                        const SDiagonalization& diag);

/// The s-diagonalization of the adjoint: eigenvalue fields conjugated
/// pointwise, all spaces, spectra, partition and gap unchanged.
SDiagonalization adjoint_sdiag(SDiagonalization diag);

}  // namespace shiftframe
