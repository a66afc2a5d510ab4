#include "shiftframe/range_operator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shiftframe/errors.hpp"
#include "shiftframe/linalg.hpp"
#include "shiftframe/parallel.hpp"

namespace shiftframe {

RangeOperatorField make_range_operator(const RangeFunctionField& range,
                                       std::vector<ComplexMatrix> ops,
                                       double invariance_tol) {
  if (ops.size() != range.bases.size()) {
    throw Error("make_range_operator: one matrix per grid point required");
  }
  const int n = range.window.fiber_dim(range.grid.dim);

  RangeOperatorField rf;
  rf.grid = range.grid;
  rf.window = range.window;
  rf.range = range;
  rf.ops = std::move(ops);

  std::vector<double> residuals(rf.ops.size(), 0.0);
  parallel_for(rf.ops.size(), [&](std::size_t g) {
    const ComplexMatrix& m = rf.ops[g];
    if (m.rows() != n || m.cols() != n) {
      std::ostringstream os;
      os << "make_range_operator: matrix at grid point " << g << " is "
         << m.rows() << "x" << m.cols() << ", expected " << n << "x" << n;
      throw Error(os.str());
    }
    require_finite(m, "make_range_operator");
    const ComplexMatrix& basis = rf.range.bases[g];
    if (basis.cols() == 0) return;
    ComplexMatrix projector = basis * basis.adjoint();
    ComplexMatrix escape =
        (ComplexMatrix::Identity(n, n) - projector) * m * projector;
    residuals[g] = spectral_norm(escape);
  });
  for (std::size_t g = 0; g < residuals.size(); ++g) {
    if (residuals[g] > invariance_tol) {
      std::ostringstream os;
      os << "make_range_operator: operator does not leave J(omega) invariant "
            "at grid point "
         << g << " (residual " << residuals[g] << ", tolerance "
         << invariance_tol << ")";
      throw Error(os.str());
    }
  }
  return rf;
}

double op_norm(const RangeOperatorField& rf) {
  std::vector<double> norms(rf.ops.size(), 0.0);
  parallel_for(rf.ops.size(), [&](std::size_t g) {
    norms[g] = spectral_norm(rf.compressed(g));
  });
  double best = 0.0;
  for (double v : norms) best = std::max(best, v);
  return best;
}

FiberField apply_operator(const RangeOperatorField& rf, const FiberField& f,
                          double membership_tol) {
  check_same_layout(rf.grid, rf.window, f.grid, f.window, "apply_operator");
  FiberField out;
  out.grid = f.grid;
  out.window = f.window;
  out.values.resize(f.values.size());
  parallel_for(f.values.size(), [&](std::size_t g) {
    const ComplexMatrix& basis = rf.range.bases[g];
    const ComplexVector& v = f.values[g];
    ComplexVector coords = basis.adjoint() * v;
    double residual = (v - basis * coords).norm();
    if (residual > membership_tol * std::max(1.0, v.norm())) {
      std::ostringstream os;
      os << "apply_operator: fiber at grid point " << g
         << " lies outside J(omega) (residual " << residual << ")";
      throw VectorOutsideSubspaceError(os.str());
    }
    out.values[g] = basis * (rf.compressed(g) * coords);
  });
  return out;
}

RangeOperatorField adjoint_field(const RangeOperatorField& rf) {
  RangeOperatorField out;
  out.grid = rf.grid;
  out.window = rf.window;
  out.range = rf.range;
  out.ops.resize(rf.ops.size());
  const int n = rf.window.fiber_dim(rf.grid.dim);
  parallel_for(rf.ops.size(), [&](std::size_t g) {
    const ComplexMatrix& basis = rf.range.bases[g];
    if (basis.cols() == 0) {
      out.ops[g] = ComplexMatrix::Zero(n, n);
      return;
    }
    // (P R P)* = B (B* R B)* B*
    out.ops[g] = basis * rf.compressed(g).adjoint() * basis.adjoint();
  });
  return out;
}

bool normality_check(const RangeOperatorField& rf, double tol) {
  std::vector<char> normal(rf.ops.size(), 1);
  parallel_for(rf.ops.size(), [&](std::size_t g) {
    ComplexMatrix a = rf.compressed(g);
    if (a.rows() == 0) return;
    double scale = spectral_norm(a);
    double residual = spectral_norm(a * a.adjoint() - a.adjoint() * a);
    if (residual > tol * std::max(1.0, scale * scale)) normal[g] = 0;
  });
  return std::all_of(normal.begin(), normal.end(),
                     [](char c) { return c != 0; });
}

}  // namespace shiftframe
