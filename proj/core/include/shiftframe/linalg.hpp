#pragma once

#include <vector>

#include "shiftframe/types.hpp"

namespace shiftframe {

/// Eigendecomposition of a (numerically) normal matrix with eigenvalues
/// grouped into clusters that are pairwise more than the clustering
/// tolerance apart.
struct EigenDecomposition {
  /// All eigenvalues with multiplicity (diagonal of the triangular factor).
  std::vector<Complex> raw_eigenvalues;
  /// Index groups into raw_eigenvalues, one per cluster.
  std::vector<std::vector<int>> clusters;
  /// Representative value per cluster (mean of members), sorted by
  /// eigenvalue_order.
  std::vector<Complex> values;
  /// Orthonormal basis of each clustered eigenspace (columns).
  std::vector<ComplexMatrix> bases;
  /// Orthogonal projection onto each clustered eigenspace.
  std::vector<ComplexMatrix> projections;

  int cluster_count() const { return static_cast<int>(values.size()); }
};

bool is_finite(const ComplexMatrix& m);
void require_finite(const ComplexMatrix& m, const char* what);

/// Largest singular value; 0 for empty matrices.
double spectral_norm(const ComplexMatrix& m);

/// Fixed total order on C used wherever distinct eigenvalues must be
/// enumerated deterministically: descending modulus, ties broken by
/// ascending argument in [0, 2*pi).
bool eigenvalue_order(const Complex& a, const Complex& b);

/// Single-linkage clustering of complex values: connected components of the
/// graph joining values at distance <= tol. Any two components end up more
/// than tol apart.
std::vector<std::vector<int>> cluster_by_tolerance(
    const std::vector<Complex>& values, double tol);

/// Eigendecomposition of a normal matrix via its Schur form. The unitary
/// Schur basis keeps the cluster projections exactly Hermitian, idempotent
/// and mutually orthogonal; for inputs passing the normality gate the
/// triangular factor is diagonal to roundoff, so the cluster spans are the
/// eigenspaces.
///
/// Throws NotNormalError when ||m m* - m* m|| > normality_tol * max(1,||m||^2)
/// and NonFiniteError on NaN/Inf input.
EigenDecomposition normal_eig(const ComplexMatrix& m,
                              double cluster_tol = kDefaultClusterTol,
                              double normality_tol = kDefaultNormalityTol);

/// Smallest distance between members of different clusters; +inf when fewer
/// than two clusters exist.
double min_intercluster_distance(const EigenDecomposition& decomp);

/// Singular values in descending order.
std::vector<double> singular_values(const ComplexMatrix& m);

struct SpanBasis {
  ComplexMatrix basis;  // orthonormal columns
  int rank = 0;
};

/// Orthonormal basis of the numerical span of the given columns. Rank is the
/// number of singular values above rank_tol relative to the largest.
SpanBasis orthonormal_span(const std::vector<ComplexVector>& columns,
                           double rank_tol = kDefaultRankTol);
SpanBasis orthonormal_span(const ComplexMatrix& columns,
                           double rank_tol = kDefaultRankTol);

}  // namespace shiftframe
