#pragma once

#include <utility>
#include <vector>

#include "shiftframe/frame_oracle.hpp"
#include "shiftframe/types.hpp"

namespace shiftframe {

/// A finite-dimensional iterate system: the vectors f_1..f_m together with
/// the operator whose powers R^0..R^k act on them.
struct IterateSystem {
  ComplexMatrix op;
  std::vector<ComplexVector> vectors;
  int iteration_count = 0;  // k; powers 0..k inclusive
};

/// All iterates R^j f_i, i outer and j inner, computed by repeated
/// multiplication so the result is independent of any eigendecomposition.
std::vector<ComplexVector> iterate_system(const IterateSystem& sys);

struct EigenvalueFrameData {
  Complex eigenvalue;       // eigenvalue of the operator itself
  FrameBounds bounds;       // oracle bounds of the projected system in the
                            // adjoint kernel ker(R* - conj(eigenvalue) I)
  int eigenspace_dim = 0;
};

struct CharacterizationResult {
  bool iterates_frame = false;
  bool projections_frames = false;
  FrameBounds iterate_bounds;
  std::vector<EigenvalueFrameData> per_eigenvalue;
};

/// Decides both sides of the finite-dimensional equivalence: whether the
/// iterates {R^j f_i} frame the full space, and whether for every eigenvalue
/// of the adjoint the orthogonally projected vectors frame that kernel. The
/// two verdicts agree whenever k >= n-1; both are computed independently via
/// the singular-value oracle. Works for arbitrary (not necessarily normal)
/// square operators.
CharacterizationResult characterization_check(
    const IterateSystem& sys, double cluster_tol = kDefaultClusterTol,
    double rank_tol = kDefaultRankTol);

/// Sum of squared eigenvalue moduli over the iteration range:
/// sum_{j=0..k} |lambda|^{2j}, with the j = 0 term equal to 1 for every
/// lambda including 0. Always >= 1.
double modulus_power_sum(Complex lambda, int k);

/// sum_{j=0..k} x^j for x >= 0 (x plays the role of a squared norm).
double geometric_power_sum(double x, int k);

/// Bounds transferred from an (A,B)-frame of iterates to the projections
/// onto a single adjoint eigenspace: both shrink by modulus_power_sum.
FrameBounds necessary_projection_bounds(double lower, double upper,
                                        Complex lambda, int k);

/// min over s of prod_{u != s} |lambda_s - lambda_u|^2; the conditioning
/// constant of the Lagrange basis at these nodes. Empty product (r = 1) is 1.
double eigenvalue_separation_product(const std::vector<Complex>& eigenvalues,
                                     double cluster_tol = kDefaultClusterTol);

/// The pair of interpolation operators connecting polynomial coefficient
/// blocks with their values at the eigenvalues:
///   evaluation:  (p_i)_{i<m} -> (p_i(lambda_s))_{i<m, s<r}
///   lift:        values      -> degree r-1 Lagrange interpolants,
///                              zero-padded to degree k
/// Blocks are laid out i-major: row (i,s) = i*r + s, column (i,j) = i*(k+1)+j.
/// evaluation * lift is the identity on the value space.
struct InterpolationOperators {
  ComplexMatrix evaluation;  // (m*r) x (m*(k+1))
  ComplexMatrix lift;        // (m*(k+1)) x (m*r)
  std::vector<Complex> eigenvalues;
  double alpha = 1.0;  // eigenvalue_separation_product
  double beta = 0.0;   // max |lambda_s|
};

InterpolationOperators build_interpolation_operators(
    const std::vector<Complex>& eigenvalues, int m, int k,
    double cluster_tol = kDefaultClusterTol);

/// Closed-form ceilings for the norms of the two interpolation operators:
///   ||evaluation|| <= sqrt(r * sum_{j=0..k} beta^{2j})
///   ||lift||       <= sqrt((r/alpha) * sum_{u=0..r-1} C(r-1,u)^2 beta^{2u})
/// and the coarser lift ceiling sqrt(r/alpha) * (1+beta)^r.
double evaluation_norm_bound(int r, double beta, int k);
double lift_norm_bound(int r, double alpha, double beta);
double lift_norm_bound_coarse(int r, double alpha, double beta);

/// Frame bounds guaranteed for the iterates when every adjoint-eigenspace
/// projection system is an (A,B)-frame of its eigenspace:
///   lower = A * ((r/alpha) * sum_{u=0..r-1} C(r-1,u)^2 op_norm^{2u})^{-1}
///   upper = B * r * sum_{j=0..k} op_norm^{2j}
FrameBounds sufficient_iterate_bounds(double lower, double upper, int r,
                                      double alpha, double op_norm, int k);

double binomial(int n, int k);

}  // namespace shiftframe
