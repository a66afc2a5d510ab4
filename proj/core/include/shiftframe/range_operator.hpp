#pragma once

#include <vector>

#include "shiftframe/fiber_field.hpp"
#include "shiftframe/types.hpp"

namespace shiftframe {

/// The fiberwise matrix realization of a shift-preserving operator: one
/// ambient n x n matrix per grid point, required to leave the fiber space
/// J(omega) invariant. Every operation below works with the restriction of
/// R(omega) to J(omega), i.e. the compression B* R B in an orthonormal basis
/// B of J(omega).
struct RangeOperatorField {
  OmegaGrid grid;
  FiberWindow window;
  std::vector<ComplexMatrix> ops;
  RangeFunctionField range;

  ComplexMatrix compressed(std::size_t g) const {
    const ComplexMatrix& basis = range.bases[g];
    return basis.adjoint() * ops[g] * basis;
  }
};

/// Builds the field and asserts the invariance residual
/// ||(I - P) R P|| <= invariance_tol at every grid point.
RangeOperatorField make_range_operator(
    const RangeFunctionField& range, std::vector<ComplexMatrix> ops,
    double invariance_tol = kDefaultInvarianceTol);

/// max over the grid of ||R(omega)|_J(omega)||.
double op_norm(const RangeOperatorField& rf);

/// Applies the restriction of R(omega) to a field with fibers in J(omega).
FiberField apply_operator(const RangeOperatorField& rf, const FiberField& f,
                          double membership_tol = kDefaultMembershipTol);

/// Pointwise adjoint of the restricted operator, acting on the same range
/// function.
RangeOperatorField adjoint_field(const RangeOperatorField& rf);

/// True when ||A A* - A* A|| <= tol * max(1, ||A||^2) for the restriction A
/// at every grid point.
bool normality_check(const RangeOperatorField& rf,
                     double tol = kDefaultNormalityTol);

}  // namespace shiftframe
