#pragma once

#include <optional>
#include <vector>

#include "shiftframe/types.hpp"

namespace shiftframe {

/// Ground-truth frame bounds of a finite vector system, straight from the
/// definition: with F the synthesis matrix of the vectors expressed in an
/// orthonormal basis of the ambient space (or of `subspace_basis` when
/// given), the optimal bounds are the extreme squared singular values of F.
///
/// When the vectors fail to span the d-dimensional space (numerical rank
/// < d), lower = 0 and is_frame = false. The rank decision compares
/// singular values against rank_tol * max(sigma_max, scale_floor); callers
/// that project vectors before the check should pass the pre-projection
/// scale as scale_floor so that a system consisting purely of projection
/// roundoff is judged rank deficient rather than a microscopic frame.
///
/// If subspace_basis is given, each vector must lie in its span within
/// membership_tol (relative), otherwise VectorOutsideSubspaceError is
/// thrown.
///
/// This function deliberately never touches the spectral machinery it is
/// used to validate; it is plain SVD of an explicitly assembled matrix.
FrameBounds frame_bounds_oracle(
    const std::vector<ComplexVector>& vectors,
    const std::optional<ComplexMatrix>& subspace_basis = std::nullopt,
    double rank_tol = kDefaultRankTol,
    double membership_tol = kOracleMembershipTol,
    double scale_floor = 0.0);

}  // namespace shiftframe
