#include "jointspec/matrix_core.hpp"

#include <algorithm>
#include <numeric>

namespace jointspec {

std::vector<std::vector<Eigen::Index>> cluster_values(const ComplexVector& values, double abs_tol,
                                                      double rel_tol) {
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double scale = std::max(std::abs(values(i)), std::abs(values(j)));
      if (std::abs(values(i) - values(j)) <= abs_tol + rel_tol * scale) {
        parent[find(i)] = find(j);
      }
    }
  }
  std::vector<std::vector<Eigen::Index>> groups;
  std::vector<Eigen::Index> slot(static_cast<std::size_t>(n), -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<Eigen::Index>(groups.size());
      groups.emplace_back();
    }
    groups[slot[r]].push_back(i);
  }
  return groups;
}

OperatorTuple::OperatorTuple(std::vector<ComplexMatrix> matrices, double flag_tol)
    : matrices_(std::move(matrices)) {
  if (matrices_.empty()) {
    throw SpectralError(ErrorCode::InvalidArgument, "operator tuple needs at least one matrix");
  }
  const Eigen::Index n = matrices_.front().rows();
  bool any_nonzero = false;
  for (const auto& m : matrices_) {
    if (m.rows() != n || m.cols() != n || n == 0) {
      throw SpectralError(ErrorCode::DimensionMismatch, "tuple members must share one square dimension");
    }
    if (!m.allFinite()) {
      throw SpectralError(ErrorCode::InvalidArgument, "tuple entries must be finite");
    }
    any_nonzero = any_nonzero || m.cwiseAbs().maxCoeff() > 0.0;
  }
  if (!any_nonzero) {
    throw SpectralError(ErrorCode::InvalidArgument, "at least one tuple member must be nonzero");
  }

  flags_.tol = flag_tol;
  flags_.all_selfadjoint = true;
  flags_.all_normal = true;
  norms_.reserve(matrices_.size());
  for (const auto& m : matrices_) {
    const double norm = operator_norm(m);
    norms_.push_back(norm);
    const double scale = std::max(norm, 1e-300);
    flags_.all_selfadjoint = flags_.all_selfadjoint && (m - m.adjoint()).norm() <= flag_tol * scale;
    flags_.all_normal = flags_.all_normal && normality_defect(m) <= flag_tol * scale * scale;
  }
}

ComplexMatrix OperatorTuple::pencil(std::span<const Complex> z) const {
  if (static_cast<Eigen::Index>(z.size()) != arity()) {
    throw SpectralError(ErrorCode::ArityMismatch, "point arity differs from tuple arity");
  }
  ComplexMatrix p = ComplexMatrix::Identity(dim(), dim());
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (z[k] != Complex(0.0)) p.noalias() += z[k] * matrices_[k];
  }
  return p;
}

ComplexMatrix OperatorTuple::pencil(const ComplexVector& z) const {
  return pencil(std::span<const Complex>(z.data(), static_cast<std::size_t>(z.size())));
}

std::size_t SpectralDecomposition::nearest_cluster(Complex lambda) const {
  std::size_t best = 0;
  for (std::size_t k = 1; k < clusters.size(); ++k) {
    if (std::abs(clusters[k].value - lambda) < std::abs(clusters[best].value - lambda)) best = k;
  }
  return best;
}

double default_cluster_gap(double matrix_norm) { return std::max(1e-7, 1e-6 * matrix_norm); }

SpectralDecomposition eig_normal(const ComplexMatrix& m, double tol, double cluster_gap) {
  require_square(m, "eig_normal");
  const double norm = operator_norm(m);
  if (normality_defect(m) > tol * norm * norm) {
    throw SpectralError(ErrorCode::NotNormal, "||MM* - M*M|| exceeds tol ||M||^2");
  }
  const Eigen::Index n = m.rows();

  Eigen::ComplexSchur<ComplexMatrix> schur(m);
  if (schur.info() != Eigen::Success) {
    throw SpectralError(ErrorCode::NoConvergence, "complex Schur iteration");
  }
  const ComplexMatrix& t = schur.matrixT();
  const double off_diagonal = t.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().norm();
  if (off_diagonal > std::sqrt(tol) * std::max(norm, 1e-300)) {
    throw SpectralError(ErrorCode::NotNormal, "Schur form is not diagonal");
  }

  const ComplexVector diag = t.diagonal();
  const double gap = cluster_gap > 0.0 ? cluster_gap : default_cluster_gap(norm);
  auto groups = cluster_values(diag, gap);
  std::vector<Complex> means;
  for (const auto& g : groups) {
    Complex s = 0.0;
    for (auto i : g) s += diag(i);
    means.push_back(s / static_cast<double>(g.size()));
  }
  std::vector<std::size_t> order(groups.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(means[a]) > std::abs(means[b]);
  });

  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.basis.resize(n, n);
  Eigen::Index col = 0;
  for (std::size_t k : order) {
    EigenCluster c{means[k], col, static_cast<Eigen::Index>(groups[k].size())};
    for (auto i : groups[k]) {
      out.eigenvalues(col) = diag(i);
      out.basis.col(col) = schur.matrixU().col(i);
      ++col;
    }
    out.clusters.push_back(c);
  }
  return out;
}

ComplexVector eigenvalues(const ComplexMatrix& m) {
  require_square(m, "eigenvalues");
  Eigen::ComplexSchur<ComplexMatrix> schur(m, /*computeU=*/false);
  if (schur.info() != Eigen::Success) {
    throw SpectralError(ErrorCode::NoConvergence, "complex Schur iteration");
  }
  return schur.matrixT().diagonal();
}

ComplexMatrix from_spectrum(const ComplexMatrix& u, const ComplexVector& d) {
  return u * d.asDiagonal() * u.adjoint();
}

}  // namespace jointspec
