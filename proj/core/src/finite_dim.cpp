#include "shiftframe/finite_dim.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "shiftframe/errors.hpp"
#include "shiftframe/linalg.hpp"

namespace shiftframe {

std::vector<ComplexVector> iterate_system(const IterateSystem& sys) {
  require_finite(sys.op, "iterate_system");
  if (sys.op.rows() != sys.op.cols()) {
    throw Error("iterate_system: operator must be square");
  }
  std::vector<ComplexVector> out;
  out.reserve(sys.vectors.size() *
              static_cast<std::size_t>(sys.iteration_count + 1));
  for (const ComplexVector& f : sys.vectors) {
    if (f.size() != sys.op.rows()) {
      throw Error("iterate_system: vector length does not match operator");
    }
    require_finite(f, "iterate_system");
    ComplexVector current = f;
    out.push_back(current);
    for (int j = 1; j <= sys.iteration_count; ++j) {
      current = sys.op * current;
      require_finite(current, "iterate_system");
      out.push_back(current);
    }
  }
  return out;
}

namespace {

// Distinct eigenvalues of a general square matrix, clustered by tolerance
// and sorted by the fixed eigenvalue order.
std::vector<Complex> clustered_spectrum(const ComplexMatrix& m,
                                        double cluster_tol) {
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, false);
  if (solver.info() != Eigen::Success) {
    throw Error("clustered_spectrum: eigensolver did not converge");
  }
  std::vector<Complex> values(solver.eigenvalues().data(),
                              solver.eigenvalues().data() + m.rows());
  std::vector<Complex> distinct;
  for (const auto& group : cluster_by_tolerance(values, cluster_tol)) {
    Complex sum = 0.0;
    for (int idx : group) sum += values[idx];
    distinct.push_back(sum / static_cast<double>(group.size()));
  }
  std::sort(distinct.begin(), distinct.end(), eigenvalue_order);
  return distinct;
}

// Orthonormal basis of the numerical null space of m (smallest singular
// directions). Falls back to the single smallest direction when the
// threshold detects nothing, since callers only ask for kernels of matrices
// known to be singular.
ComplexMatrix null_space_basis(const ComplexMatrix& m, double tol) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  int dim = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) <= tol) ++dim;
  }
  if (dim == 0) dim = 1;
  return svd.matrixV().rightCols(dim);
}

}  // namespace

CharacterizationResult characterization_check(const IterateSystem& sys,
                                              double cluster_tol,
                                              double rank_tol) {
  CharacterizationResult out;
  const Eigen::Index n = sys.op.rows();

  // Rank decisions for projected systems are taken relative to the scale of
  // the unprojected vectors, so a projection consisting of pure roundoff is
  // judged rank deficient.
  double scale_floor = 0.0;
  for (const ComplexVector& f : sys.vectors) {
    scale_floor = std::max(scale_floor, f.norm());
  }

  out.iterate_bounds = frame_bounds_oracle(iterate_system(sys), std::nullopt,
                                           rank_tol, kOracleMembershipTol,
                                           scale_floor);
  out.iterates_frame = out.iterate_bounds.is_frame;

  // Eigenvalues are indexed by the operator itself; the adjoint kernel for
  // eigenvalue mu is ker(R* - conj(mu) I).
  std::vector<Complex> spectrum = clustered_spectrum(sys.op, cluster_tol);
  double op_scale = spectral_norm(sys.op);
  double kernel_tol = 1e-6 * std::max(1.0, op_scale);

  out.projections_frames = true;
  ComplexMatrix adjoint = sys.op.adjoint();
  for (const Complex& mu : spectrum) {
    ComplexMatrix shifted =
        adjoint - std::conj(mu) * ComplexMatrix::Identity(n, n);
    ComplexMatrix kernel = null_space_basis(shifted, kernel_tol);

    std::vector<ComplexVector> projected;
    projected.reserve(sys.vectors.size());
    for (const ComplexVector& f : sys.vectors) {
      projected.push_back(kernel * (kernel.adjoint() * f));
    }
    // Membership is exact by construction; bounds are taken in the kernel.
    FrameBounds bounds = frame_bounds_oracle(projected, kernel, rank_tol,
                                             kOracleMembershipTol,
                                             scale_floor);
    out.projections_frames = out.projections_frames && bounds.is_frame;
    out.per_eigenvalue.push_back(
        {mu, bounds, static_cast<int>(kernel.cols())});
  }
  return out;
}

double modulus_power_sum(Complex lambda, int k) {
  double a2 = std::norm(lambda);
  double sum = 1.0;  // j = 0 term, |lambda|^0 := 1 for every lambda
  double term = 1.0;
  for (int j = 1; j <= k; ++j) {
    term *= a2;
    sum += term;
  }
  return sum;
}

double geometric_power_sum(double x, int k) {
  double sum = 1.0;
  double term = 1.0;
  for (int j = 1; j <= k; ++j) {
    term *= x;
    sum += term;
  }
  return sum;
}

FrameBounds necessary_projection_bounds(double lower, double upper,
                                        Complex lambda, int k) {
  if (!(lower > 0.0) || lower > upper) {
    std::ostringstream os;
    os << "necessary_projection_bounds: need 0 < A <= B, got A=" << lower
       << " B=" << upper;
    throw InvalidBoundsError(os.str());
  }
  double c = modulus_power_sum(lambda, k);
  return {lower / c, upper / c, true};
}

double eigenvalue_separation_product(const std::vector<Complex>& eigenvalues,
                                     double cluster_tol) {
  const std::size_t r = eigenvalues.size();
  if (r == 0) {
    throw Error("eigenvalue_separation_product: empty eigenvalue list");
  }
  double min_product = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < r; ++s) {
    double product = 1.0;
    for (std::size_t u = 0; u < r; ++u) {
      if (u == s) continue;
      double dist = std::abs(eigenvalues[s] - eigenvalues[u]);
      if (dist <= cluster_tol) {
        std::ostringstream os;
        os << "eigenvalue_separation_product: eigenvalues " << s << " and "
           << u << " coincide within " << cluster_tol;
        throw DegenerateEigenvaluesError(os.str());
      }
      product *= dist * dist;
    }
    min_product = std::min(min_product, product);
  }
  return r == 1 ? 1.0 : min_product;
}

InterpolationOperators build_interpolation_operators(
    const std::vector<Complex>& eigenvalues, int m, int k,
    double cluster_tol) {
  const int r = static_cast<int>(eigenvalues.size());
  if (r < 1 || m < 1) {
    throw Error("build_interpolation_operators: need r >= 1 and m >= 1");
  }
  if (k < r - 1) {
    throw Error(
        "build_interpolation_operators: iteration count k must be >= r-1");
  }

  InterpolationOperators out;
  out.eigenvalues = eigenvalues;
  out.alpha = eigenvalue_separation_product(eigenvalues, cluster_tol);
  out.beta = 0.0;
  for (const Complex& l : eigenvalues) {
    out.beta = std::max(out.beta, std::abs(l));
  }

  // Per-block evaluation matrix: Vandermonde rows (lambda_s^j)_j.
  ComplexMatrix evaluation_block(r, k + 1);
  for (int s = 0; s < r; ++s) {
    Complex power = 1.0;
    for (int j = 0; j <= k; ++j) {
      evaluation_block(s, j) = power;
      power *= eigenvalues[s];
    }
  }

  // Per-block lift matrix: column s holds the coefficients of the Lagrange
  // basis polynomial through the nodes, zero-padded beyond degree r-1.
  ComplexMatrix lift_block = ComplexMatrix::Zero(k + 1, r);
  for (int s = 0; s < r; ++s) {
    std::vector<Complex> poly{1.0};
    Complex denom = 1.0;
    for (int u = 0; u < r; ++u) {
      if (u == s) continue;
      // poly *= (z - lambda_u)
      std::vector<Complex> next(poly.size() + 1, 0.0);
      for (std::size_t d = 0; d < poly.size(); ++d) {
        next[d + 1] += poly[d];
        next[d] -= eigenvalues[u] * poly[d];
      }
      poly = std::move(next);
      denom *= eigenvalues[s] - eigenvalues[u];
    }
    for (std::size_t d = 0; d < poly.size(); ++d) {
      lift_block(static_cast<Eigen::Index>(d), s) = poly[d] / denom;
    }
  }

  out.evaluation = ComplexMatrix::Zero(m * r, m * (k + 1));
  out.lift = ComplexMatrix::Zero(m * (k + 1), m * r);
  for (int i = 0; i < m; ++i) {
    out.evaluation.block(i * r, i * (k + 1), r, k + 1) = evaluation_block;
    out.lift.block(i * (k + 1), i * r, k + 1, r) = lift_block;
  }
  return out;
}

double evaluation_norm_bound(int r, double beta, int k) {
  return std::sqrt(r * geometric_power_sum(beta * beta, k));
}

double lift_norm_bound(int r, double alpha, double beta) {
  double sum = 0.0;
  for (int u = 0; u <= r - 1; ++u) {
    double b = binomial(r - 1, u);
    sum += b * b * std::pow(beta, 2 * u);
  }
  return std::sqrt(static_cast<double>(r) / alpha * sum);
}

double lift_norm_bound_coarse(int r, double alpha, double beta) {
  return std::sqrt(static_cast<double>(r) / alpha) * std::pow(1.0 + beta, r);
}

FrameBounds sufficient_iterate_bounds(double lower, double upper, int r,
                                      double alpha, double op_norm, int k) {
  if (lower > upper || !(alpha > 0.0) || r < 1) {
    std::ostringstream os;
    os << "sufficient_iterate_bounds: need A <= B, alpha > 0, r >= 1 (A="
       << lower << " B=" << upper << " alpha=" << alpha << " r=" << r << ")";
    throw InvalidBoundsError(os.str());
  }
  double denom = 0.0;
  for (int u = 0; u <= r - 1; ++u) {
    double b = binomial(r - 1, u);
    denom += b * b * std::pow(op_norm, 2 * u);
  }
  denom *= static_cast<double>(r) / alpha;

  FrameBounds out;
  out.lower = lower / denom;
  out.upper = upper * static_cast<double>(r) *
              geometric_power_sum(op_norm * op_norm, k);
  out.is_frame = out.lower > 0.0;
  return out;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return result;
}

}  // namespace shiftframe
