#include "shiftframe/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "shiftframe/errors.hpp"

namespace shiftframe {

bool is_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const Complex& z = m(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
  }
  return true;
}

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!is_finite(m)) {
    std::ostringstream os;
    os << what << ": matrix contains NaN or Inf";
    throw NonFiniteError(os.str());
  }
}

double spectral_norm(const ComplexMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

bool eigenvalue_order(const Complex& a, const Complex& b) {
  double ma = std::abs(a);
  double mb = std::abs(b);
  if (ma != mb) return ma > mb;
  double aa = std::arg(a);
  double ab = std::arg(b);
  if (aa < 0) aa += 6.283185307179586476925286766559;
  if (ab < 0) ab += 6.283185307179586476925286766559;
  return aa < ab;
}

std::vector<std::vector<int>> cluster_by_tolerance(
    const std::vector<Complex>& values, double tol) {
  int n = static_cast<int>(values.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(values[i] - values[j]) <= tol) {
        parent[find(i)] = find(j);
      }
    }
  }
  std::vector<std::vector<int>> groups;
  std::vector<int> root_to_group(n, -1);
  for (int i = 0; i < n; ++i) {
    int r = find(i);
    if (root_to_group[r] < 0) {
      root_to_group[r] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[root_to_group[r]].push_back(i);
  }
  return groups;
}

EigenDecomposition normal_eig(const ComplexMatrix& m, double cluster_tol,
                              double normality_tol) {
  require_finite(m, "normal_eig");
  if (m.rows() != m.cols()) {
    throw Error("normal_eig: matrix must be square");
  }

  EigenDecomposition out;
  const Eigen::Index n = m.rows();
  if (n == 0) return out;

  double scale = spectral_norm(m);
  double commutator =
      spectral_norm(m * m.adjoint() - m.adjoint() * m);
  if (commutator > normality_tol * std::max(1.0, scale * scale)) {
    std::ostringstream os;
    os << "normal_eig: normality residual " << commutator
       << " exceeds tolerance " << normality_tol * std::max(1.0, scale * scale);
    throw NotNormalError(os.str());
  }

  Eigen::ComplexSchur<ComplexMatrix> schur(m, /*computeU=*/true);
  if (schur.info() != Eigen::Success) {
    throw Error("normal_eig: Schur decomposition did not converge");
  }
  const ComplexMatrix& unitary = schur.matrixU();
  const ComplexMatrix& triangular = schur.matrixT();

  out.raw_eigenvalues.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.raw_eigenvalues[i] = triangular(i, i);
  }

  auto groups = cluster_by_tolerance(out.raw_eigenvalues, cluster_tol);

  struct ClusterData {
    Complex value;
    std::vector<int> members;
    ComplexMatrix basis;
  };
  std::vector<ClusterData> data;
  data.reserve(groups.size());
  for (auto& members : groups) {
    ClusterData c;
    c.members = members;
    Complex sum = 0.0;
    for (int idx : members) sum += out.raw_eigenvalues[idx];
    c.value = sum / static_cast<double>(members.size());
    c.basis.resize(n, static_cast<Eigen::Index>(members.size()));
    for (std::size_t j = 0; j < members.size(); ++j) {
      c.basis.col(static_cast<Eigen::Index>(j)) = unitary.col(members[j]);
    }
    data.push_back(std::move(c));
  }
  std::sort(data.begin(), data.end(),
            [](const ClusterData& a, const ClusterData& b) {
              return eigenvalue_order(a.value, b.value);
            });

  for (auto& c : data) {
    out.clusters.push_back(std::move(c.members));
    out.values.push_back(c.value);
    out.projections.push_back(c.basis * c.basis.adjoint());
    out.bases.push_back(std::move(c.basis));
  }
  return out;
}

double min_intercluster_distance(const EigenDecomposition& decomp) {
  double best = std::numeric_limits<double>::infinity();
  int r = decomp.cluster_count();
  for (int s = 0; s < r; ++s) {
    for (int t = s + 1; t < r; ++t) {
      for (int i : decomp.clusters[s]) {
        for (int j : decomp.clusters[t]) {
          best = std::min(best, std::abs(decomp.raw_eigenvalues[i] -
                                         decomp.raw_eigenvalues[j]));
        }
      }
    }
  }
  return best;
}

std::vector<double> singular_values(const ComplexMatrix& m) {
  require_finite(m, "singular_values");
  if (m.rows() == 0 || m.cols() == 0) return {};
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& sv = svd.singularValues();
  return {sv.data(), sv.data() + sv.size()};
}

SpanBasis orthonormal_span(const ComplexMatrix& columns, double rank_tol) {
  require_finite(columns, "orthonormal_span");
  SpanBasis out;
  out.basis.resize(columns.rows(), 0);
  if (columns.rows() == 0 || columns.cols() == 0) return out;

  Eigen::JacobiSVD<ComplexMatrix> svd(columns, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  double top = sv.size() > 0 ? sv(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rank_tol * top) ++rank;
  }
  out.rank = rank;
  out.basis = svd.matrixU().leftCols(rank);
  return out;
}

SpanBasis orthonormal_span(const std::vector<ComplexVector>& columns,
                           double rank_tol) {
  if (columns.empty()) return SpanBasis{ComplexMatrix(0, 0), 0};
  const Eigen::Index n = columns.front().size();
  ComplexMatrix m(n, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != n) {
      throw Error("orthonormal_span: vectors have mixed lengths");
    }
    m.col(static_cast<Eigen::Index>(j)) = columns[j];
  }
  return orthonormal_span(m, rank_tol);
}

}  // namespace shiftframe
