#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "shiftframe/grid.hpp"
#include "shiftframe/types.hpp"

namespace shiftframe {

/// A function of the model space represented by its fibers: one vector in
/// C^n per grid point.
struct FiberField {
  OmegaGrid grid;
  FiberWindow window;
  std::vector<ComplexVector> values;

  int fiber_dim() const { return window.fiber_dim(grid.dim); }
};

/// The range function of the space: per grid point, an orthonormal basis of
/// the fiber space J(omega) together with its dimension (basis column
/// count).
struct RangeFunctionField {
  OmegaGrid grid;
  FiberWindow window;
  std::vector<ComplexMatrix> bases;

  int dim_at(std::size_t g) const {
    return static_cast<int>(bases[g].cols());
  }
};

void check_same_layout(const OmegaGrid& a_grid, const FiberWindow& a_window,
                       const OmegaGrid& b_grid, const FiberWindow& b_window,
                       const char* what);

/// Spans the generator fibers pointwise.
RangeFunctionField range_function_from_generators(
    std::span<const FiberField> generators,
    double rank_tol = kDefaultRankTol);

struct SpectrumInfo {
  std::vector<std::size_t> spectrum;  // grid indices with dim J > 0
  int length = 0;                     // max over the grid of dim J
};

SpectrumInfo spectrum_and_length(const RangeFunctionField& range);

/// Pointwise orthogonal projection of the fibers onto J(omega).
FiberField project_onto_range(const FiberField& f,
                              const RangeFunctionField& range);

/// Modulates the fibers by the unimodular character of an integer shift:
/// value at omega is multiplied by exp(-2*pi*i*<omega, shift>).
FiberField apply_translation(const FiberField& f,
                             std::span<const int> shift);

struct PerPointBounds {
  std::size_t grid_index = 0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Uniform frame verdict for a fiber system against a range function:
/// per-point oracle bounds are reduced by exact min/max over the spectrum
/// (points with dim J = 0 impose no constraint). The system is a frame
/// generator set exactly when every spectrum point is spanned and the
/// uniform lower bound is positive.
struct UniformFrameReport {
  FrameBounds bounds;
  bool is_frame_generator = false;
  std::vector<PerPointBounds> detail;
};

UniformFrameReport uniform_frame_check(
    std::span<const FiberField> system, const RangeFunctionField& range,
    double membership_tol = kDefaultMembershipTol,
    double rank_tol = kDefaultRankTol, double scale_floor = 0.0);

/// Largest fiber norm across a system; the natural scale floor for frame
/// checks of systems derived from these fields by projection.
double system_scale(std::span<const FiberField> system);

}  // namespace shiftframe
