#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "jointspec/error.hpp"

namespace jointspec {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw SpectralError(ErrorCode::DimensionMismatch,
                        std::string(what) + ": matrix must be square and nonempty");
  }
}

/// det(M) via partial-pivot LU.
template <typename Derived>
typename Derived::Scalar determinant(const Eigen::MatrixBase<Derived>& m) {
  require_square(m, "determinant");
  using Plain = typename Derived::PlainObject;
  return Eigen::PartialPivLU<Plain>(m.eval()).determinant();
}

/// Singular values of M, ascending, from the Hermitian eigendecomposition of M*M.
template <typename Derived>
Eigen::VectorXd singular_values_gram(const Eigen::MatrixBase<Derived>& m) {
  using Plain = typename Derived::PlainObject;
  const Plain gram = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Plain> es(gram, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw SpectralError(ErrorCode::NoConvergence, "Hermitian eigensolver on M*M");
  }
  return es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
}

/// Largest singular value.
template <typename Derived>
double operator_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  return singular_values_gram(m).maxCoeff();
}

/// Smallest singular value of a square matrix.
///
/// The minimizing eigenvector v of M*M is computed and ||Mv|| is returned; this
/// stays an upper bound on the true value and avoids the sqrt(eps) floor of
/// taking the square root of the smallest eigenvalue directly.
template <typename Derived>
double smallest_singular_value(const Eigen::MatrixBase<Derived>& m) {
  require_square(m, "smallest_singular_value");
  using Plain = typename Derived::PlainObject;
  const Plain gram = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Plain> es(gram);
  if (es.info() != Eigen::Success) {
    throw SpectralError(ErrorCode::NoConvergence, "Hermitian eigensolver on M*M");
  }
  return (m * es.eigenvectors().col(0)).norm();
}

/// ||AB - BA|| in the operator 2-norm.
template <typename DerivedA, typename DerivedB>
double commutator_norm(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw SpectralError(ErrorCode::DimensionMismatch, "commutator_norm: operands differ in shape");
  }
  return operator_norm((a * b - b * a).eval());
}

/// ||MM* - M*M||.
template <typename Derived>
double normality_defect(const Eigen::MatrixBase<Derived>& m) {
  return operator_norm((m * m.adjoint() - m.adjoint() * m).eval());
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

/// Groups of indices whose values chain together within
/// abs_tol + rel_tol * |value| (single linkage).
std::vector<std::vector<Eigen::Index>> cluster_values(const ComplexVector& values, double abs_tol,
                                                      double rel_tol = 0.0);

/// An ordered tuple (A_1, ..., A_n) of square matrices sharing one dimension.
class OperatorTuple {
 public:
  struct Flags {
    bool all_selfadjoint = false;
    bool all_normal = false;
    double tol = 0.0;
  };

  explicit OperatorTuple(std::vector<ComplexMatrix> matrices, double flag_tol = 1e-9);

  Eigen::Index arity() const { return static_cast<Eigen::Index>(matrices_.size()); }
  Eigen::Index dim() const { return matrices_.front().rows(); }
  const ComplexMatrix& operator[](Eigen::Index k) const { return matrices_[static_cast<std::size_t>(k)]; }
  const std::vector<ComplexMatrix>& matrices() const { return matrices_; }
  const Flags& flags() const { return flags_; }

  /// I + sum_k z_k A_k.
  ComplexMatrix pencil(std::span<const Complex> z) const;
  ComplexMatrix pencil(const ComplexVector& z) const;

  /// Operator norms of each member, cached.
  const std::vector<double>& norms() const { return norms_; }

 private:
  std::vector<ComplexMatrix> matrices_;
  std::vector<double> norms_;
  Flags flags_;
};

struct EigenCluster {
  Complex value;
  Eigen::Index offset = 0;
  Eigen::Index multiplicity = 0;
};

/// Unitary eigendecomposition of a normal matrix. Columns of `basis` are
/// ordered so each cluster occupies a contiguous block; clusters are sorted
/// by decreasing modulus.
struct SpectralDecomposition {
  ComplexVector eigenvalues;
  ComplexMatrix basis;
  std::vector<EigenCluster> clusters;

  auto eigenspace(std::size_t k) const {
    return basis.middleCols(clusters[k].offset, clusters[k].multiplicity);
  }
  ComplexMatrix projection(std::size_t k) const {
    const auto e = eigenspace(k);
    return e * e.adjoint();
  }
  /// Index of the cluster nearest to `lambda`.
  std::size_t nearest_cluster(Complex lambda) const;
};

/// Default cluster gap for eigenvalue multiplicity: max(1e-7, 1e-6 * ||M||).
double default_cluster_gap(double matrix_norm);

/// Eigendecomposition of a normal matrix via complex Schur (Hessenberg + shifted QR).
/// Throws NotNormal when ||MM* - M*M|| > tol ||M||^2 or the Schur form is not
/// diagonal to sqrt(tol) ||M||; NoConvergence when QR stalls.
SpectralDecomposition eig_normal(const ComplexMatrix& m, double tol = 1e-8, double cluster_gap = -1.0);

/// Eigenvalues of an arbitrary square matrix.
ComplexVector eigenvalues(const ComplexMatrix& m);

/// Builds U diag(d) U*.
ComplexMatrix from_spectrum(const ComplexMatrix& u, const ComplexVector& d);

}  // namespace jointspec
