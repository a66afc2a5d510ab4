#include "shiftframe/frame_oracle.hpp"

#include <cmath>
#include <sstream>

#include "shiftframe/errors.hpp"
#include "shiftframe/linalg.hpp"

namespace shiftframe {

FrameBounds frame_bounds_oracle(
    const std::vector<ComplexVector>& vectors,
    const std::optional<ComplexMatrix>& subspace_basis, double rank_tol,
    double membership_tol, double scale_floor) {
  Eigen::Index ambient = -1;
  if (subspace_basis) {
    ambient = subspace_basis->rows();
  } else if (!vectors.empty()) {
    ambient = vectors.front().size();
  }
  if (ambient < 0) {
    throw Error("frame_bounds_oracle: no vectors and no subspace basis");
  }
  const Eigen::Index dim = subspace_basis ? subspace_basis->cols() : ambient;
  if (dim == 0) {
    throw Error("frame_bounds_oracle: zero-dimensional subspace");
  }

  ComplexMatrix synthesis(dim, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    const ComplexVector& v = vectors[j];
    if (v.size() != ambient) {
      throw Error("frame_bounds_oracle: vector length does not match space");
    }
    require_finite(v, "frame_bounds_oracle");
    if (subspace_basis) {
      ComplexVector coords = subspace_basis->adjoint() * v;
      double residual = (v - *subspace_basis * coords).norm();
      if (residual > membership_tol * std::max(1.0, v.norm())) {
        std::ostringstream os;
        os << "frame_bounds_oracle: vector " << j
           << " lies outside the subspace (residual " << residual << ")";
        throw VectorOutsideSubspaceError(os.str());
      }
      synthesis.col(static_cast<Eigen::Index>(j)) = coords;
    } else {
      synthesis.col(static_cast<Eigen::Index>(j)) = v;
    }
  }

  FrameBounds out;
  std::vector<double> sv = singular_values(synthesis);
  if (sv.empty()) return out;  // no vectors: not a frame of dim >= 1

  out.upper = sv.front() * sv.front();
  double rank_scale = std::max(sv.front(), scale_floor);
  bool spans =
      static_cast<Eigen::Index>(sv.size()) >= dim &&
      sv[static_cast<std::size_t>(dim - 1)] > rank_tol * rank_scale;
  if (spans) {
    double smin = sv[static_cast<std::size_t>(dim - 1)];
    out.lower = smin * smin;
    out.is_frame = true;
  }
  return out;
}

}  // namespace shiftframe
