#include "shiftframe/fiber_field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shiftframe/errors.hpp"
#include "shiftframe/frame_oracle.hpp"
#include "shiftframe/linalg.hpp"
#include "shiftframe/parallel.hpp"

namespace shiftframe {

void check_same_layout(const OmegaGrid& a_grid, const FiberWindow& a_window,
                       const OmegaGrid& b_grid, const FiberWindow& b_window,
                       const char* what) {
  if (!(a_grid == b_grid) || !(a_window == b_window)) {
    std::ostringstream os;
    os << what << ": fields live on different grids or windows";
    throw GridMismatchError(os.str());
  }
}

RangeFunctionField range_function_from_generators(
    std::span<const FiberField> generators, double rank_tol) {
  if (generators.empty()) {
    throw Error("range_function_from_generators: no generators");
  }
  const FiberField& first = generators.front();
  for (const FiberField& g : generators) {
    check_same_layout(first.grid, first.window, g.grid, g.window,
                      "range_function_from_generators");
  }

  RangeFunctionField out;
  out.grid = first.grid;
  out.window = first.window;
  out.bases.resize(first.grid.size());
  parallel_for(first.grid.size(), [&](std::size_t g) {
    ComplexMatrix columns(first.fiber_dim(),
                          static_cast<Eigen::Index>(generators.size()));
    for (std::size_t j = 0; j < generators.size(); ++j) {
      columns.col(static_cast<Eigen::Index>(j)) = generators[j].values[g];
    }
    out.bases[g] = orthonormal_span(columns, rank_tol).basis;
  });
  return out;
}

SpectrumInfo spectrum_and_length(const RangeFunctionField& range) {
  SpectrumInfo info;
  for (std::size_t g = 0; g < range.bases.size(); ++g) {
    int d = range.dim_at(g);
    if (d > 0) info.spectrum.push_back(g);
    info.length = std::max(info.length, d);
  }
  return info;
}

FiberField project_onto_range(const FiberField& f,
                              const RangeFunctionField& range) {
  check_same_layout(f.grid, f.window, range.grid, range.window,
                    "project_onto_range");
  FiberField out;
  out.grid = f.grid;
  out.window = f.window;
  out.values.resize(f.values.size());
  parallel_for(f.values.size(), [&](std::size_t g) {
    const ComplexMatrix& basis = range.bases[g];
    out.values[g] = basis * (basis.adjoint() * f.values[g]);
  });
  return out;
}

FiberField apply_translation(const FiberField& f, std::span<const int> shift) {
  if (static_cast<int>(shift.size()) != f.grid.dim) {
    throw Error("apply_translation: shift dimension does not match grid");
  }
  FiberField out;
  out.grid = f.grid;
  out.window = f.window;
  out.values.resize(f.values.size());
  const double two_pi = 6.283185307179586476925286766559;
  for (std::size_t g = 0; g < f.values.size(); ++g) {
    std::vector<double> omega = f.grid.point(g);
    double phase = 0.0;
    for (int a = 0; a < f.grid.dim; ++a) phase += omega[a] * shift[a];
    Complex factor = std::polar(1.0, -two_pi * phase);
    out.values[g] = factor * f.values[g];
  }
  return out;
}

double system_scale(std::span<const FiberField> system) {
  double scale = 0.0;
  for (const FiberField& f : system) {
    for (const ComplexVector& v : f.values) {
      scale = std::max(scale, v.norm());
    }
  }
  return scale;
}

UniformFrameReport uniform_frame_check(std::span<const FiberField> system,
                                       const RangeFunctionField& range,
                                       double membership_tol, double rank_tol,
                                       double scale_floor) {
  for (const FiberField& f : system) {
    check_same_layout(f.grid, f.window, range.grid, range.window,
                      "uniform_frame_check");
  }

  const std::size_t points = range.bases.size();
  std::vector<char> on_spectrum(points, 0);
  std::vector<FrameBounds> per_point(points);

  parallel_for(points, [&](std::size_t g) {
    if (range.dim_at(g) == 0) return;  // no constraint off the spectrum
    on_spectrum[g] = 1;
    std::vector<ComplexVector> fibers;
    fibers.reserve(system.size());
    for (const FiberField& f : system) fibers.push_back(f.values[g]);
    per_point[g] = frame_bounds_oracle(fibers, range.bases[g], rank_tol,
                                       membership_tol, scale_floor);
  });

  UniformFrameReport report;
  bool any = false;
  bool all_span = true;
  double lower = 0.0;
  double upper = 0.0;
  for (std::size_t g = 0; g < points; ++g) {
    if (!on_spectrum[g]) continue;
    const FrameBounds& b = per_point[g];
    report.detail.push_back({g, b.lower, b.upper});
    if (!any) {
      lower = b.lower;
      upper = b.upper;
      any = true;
    } else {
      lower = std::min(lower, b.lower);
      upper = std::max(upper, b.upper);
    }
    all_span = all_span && b.is_frame;
  }

  if (!any) {
    // Empty spectrum: the space is trivial and the frame condition holds
    // vacuously.
    report.bounds = {0.0, 0.0, false};
    report.is_frame_generator = true;
    return report;
  }
  report.bounds.lower = lower;
  report.bounds.upper = upper;
  report.is_frame_generator = all_span && lower > 0.0;
  report.bounds.is_frame = report.is_frame_generator;
  return report;
}

}  // namespace shiftframe
