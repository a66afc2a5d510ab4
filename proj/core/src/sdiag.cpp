#include "shiftframe/sdiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "shiftframe/errors.hpp"
#include "shiftframe/linalg.hpp"
#include "shiftframe/parallel.hpp"

namespace shiftframe {

SDiagonalization s_diagonalize(const RangeOperatorField& rf,
                               double cluster_tol, double normality_tol) {
  if (!normality_check(rf, normality_tol)) {
    throw NotNormalError(
        "s_diagonalize: range operator fails the normality check");
  }

  const std::size_t points = rf.ops.size();
  const int n = rf.window.fiber_dim(rf.grid.dim);

  SDiagonalization diag;
  diag.grid = rf.grid;
  diag.window = rf.window;
  diag.padding_constant = op_norm(rf) + 1.0;
  diag.distinct_counts.assign(points, 0);

  std::vector<EigenDecomposition> decomps(points);
  parallel_for(points, [&](std::size_t g) {
    if (rf.range.dim_at(g) == 0) return;
    EigenDecomposition d = normal_eig(rf.compressed(g), cluster_tol,
                                      normality_tol);
    if (d.cluster_count() > 1) {
      double sep = min_intercluster_distance(d);
      if (sep <= 2.0 * cluster_tol) {
        std::ostringstream os;
        os << "s_diagonalize: clusters at grid point " << g
           << " are separated by " << sep
           << ", within twice the clustering tolerance " << cluster_tol;
        throw DegenerateClusteringError(os.str());
      }
    }
    decomps[g] = std::move(d);
  });

  int r = 0;
  for (std::size_t g = 0; g < points; ++g) {
    diag.distinct_counts[g] = decomps[g].cluster_count();
    r = std::max(r, diag.distinct_counts[g]);
  }
  diag.count = r;

  diag.eigenvalue_fields.assign(
      static_cast<std::size_t>(r), std::vector<Complex>(points));
  diag.eigenspaces.resize(static_cast<std::size_t>(r));
  for (int s = 0; s < r; ++s) {
    diag.eigenspaces[s].grid = rf.grid;
    diag.eigenspaces[s].window = rf.window;
    diag.eigenspaces[s].bases.resize(points);
  }

  parallel_for(points, [&](std::size_t g) {
    const EigenDecomposition& d = decomps[g];
    const int h = diag.distinct_counts[g];
    const ComplexMatrix& basis = rf.range.bases[g];
    for (int s = 0; s < r; ++s) {
      if (s < h) {
        diag.eigenvalue_fields[s][g] = d.values[s];
        // Eigenvectors of the compression lifted back to ambient fibers.
        diag.eigenspaces[s].bases[g] = basis * d.bases[s];
      } else {
        diag.eigenvalue_fields[s][g] =
            Complex(diag.padding_constant + static_cast<double>(s + 1), 0.0);
        diag.eigenspaces[s].bases[g] = ComplexMatrix(n, 0);
      }
    }
  });

  diag.spectra.resize(static_cast<std::size_t>(r));
  diag.partition.resize(static_cast<std::size_t>(r));
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < points; ++g) {
    const int h = diag.distinct_counts[g];
    for (int s = 0; s < h; ++s) diag.spectra[s].push_back(g);
    if (h >= 1) diag.partition[h - 1].push_back(g);
    const EigenDecomposition& d = decomps[g];
    for (int s = 0; s < h; ++s) {
      for (int t = s + 1; t < h; ++t) {
        gap = std::min(gap, std::abs(d.values[s] - d.values[t]));
      }
    }
  }
  diag.gap = gap;
  return diag;
}

GapCheck spectral_gap(const SDiagonalization& diag, double c_min) {
  GapCheck check;
  check.value = diag.gap;
  check.pass = diag.gap_is_sentinel() || diag.gap >= c_min;
  return check;
}

double spectral_reconstruction_residual(const RangeOperatorField& rf,
                                        const SDiagonalization& diag) {
  const std::size_t points = rf.ops.size();
  const int n = rf.window.fiber_dim(rf.grid.dim);
  std::vector<double> residuals(points, 0.0);
  parallel_for(points, [&](std::size_t g) {
    const ComplexMatrix& basis = rf.range.bases[g];
    ComplexMatrix restricted =
        basis * rf.compressed(g) * basis.adjoint();
    ComplexMatrix sum = ComplexMatrix::Zero(n, n);
    for (int s = 0; s < diag.distinct_counts[g]; ++s) {
      const ComplexMatrix& eig_basis = diag.eigenspaces[s].bases[g];
      sum += diag.eigenvalue_fields[s][g] * (eig_basis * eig_basis.adjoint());
    }
    residuals[g] = spectral_norm(restricted - sum);
  });
  double best = 0.0;
  for (double v : residuals) best = std::max(best, v);
  return best;
}

SDiagonalization adjoint_sdiag(SDiagonalization diag) {
  for (auto& field : diag.eigenvalue_fields) {
    for (Complex& v : field) v = std::conj(v);
  }
  return diag;
}

}  // namespace shiftframe
