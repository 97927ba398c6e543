#include "jointspec/spectra.hpp"

#include <algorithm>
#include <cmath>

#include "jointspec/random.hpp"

namespace jointspec {

SpectrumPoint membership(const OperatorTuple& tuple, const ComplexVector& z, double tol) {
  if (z.size() != tuple.arity()) throw SpectralError(ErrorCode::ArityMismatch, "point arity differs from tuple arity");
  SpectrumPoint out;
  out.z = z;
  out.witness = smallest_singular_value(tuple.pencil(z));
  double scale = 1.0;
  for (Eigen::Index k = 0; k < z.size(); ++k) scale += std::abs(z(k)) * tuple.norms()[static_cast<std::size_t>(k)];
  out.threshold = tol * scale;
  out.member = out.witness <= out.threshold;
  return out;
}

HyperplaneCheck hyperplane_membership(const OperatorTuple& tuple, const MultiPoly& charpoly, const ComplexVector& a,
                                      int samples, double tol, std::uint64_t seed) {
  const Eigen::Index n = tuple.arity();
  if (a.size() != n || charpoly.arity() != n) {
    throw SpectralError(ErrorCode::ArityMismatch, "hyperplane arity differs from tuple arity");
  }
  const double norm2 = a.squaredNorm();
  if (norm2 == 0.0) throw SpectralError(ErrorCode::ZeroNormal, "hyperplane normal is zero");

  // <a, z> = sum a_j z_j is bilinear, so the plane's directions are the
  // Hermitian complement of conj(a); z* = -conj(a)/|a|^2 satisfies <a, z*> = -1.
  const ComplexVector anchor = -a.conjugate() / norm2;
  ComplexMatrix directions(n, n - 1);
  if (n > 1) {
    Eigen::HouseholderQR<ComplexMatrix> qr(a.conjugate());
    const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
    directions = q.rightCols(n - 1);
  }

  Rng rng(seed);
  HyperplaneCheck out;
  out.samples = samples;
  out.contained = true;
  for (int s = 0; s < samples; ++s) {
    ComplexVector z = anchor;
    for (Eigen::Index i = 0; i + 1 < n; ++i) z += uniform_disk(rng, 2.0) * directions.col(i);
    const auto point = membership(tuple, z, tol);
    const double majorant = std::max(evaluate_majorant(charpoly, z), 1.0);
    const double poly_residual = std::abs(evaluate(charpoly, z)) / majorant;
    out.max_witness = std::max(out.max_witness, point.witness);
    out.max_relative_witness = std::max(out.max_relative_witness, point.witness / point.threshold);
    out.max_poly_residual = std::max(out.max_poly_residual, poly_residual);
    out.contained = out.contained && point.member && poly_residual <= tol;
  }
  return out;
}

HyperplaneCheck hyperplane_membership(const OperatorTuple& tuple, const ComplexVector& a, int samples, double tol,
                                      std::uint64_t seed) {
  return hyperplane_membership(tuple, charpoly(tuple), a, samples, tol, seed);
}

CurveSample sample_curve(const ComplexMatrix& a, const ComplexMatrix& b, const std::vector<Complex>& w_grid) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw SpectralError(ErrorCode::DimensionMismatch, "curve pair must share one dimension");
  }
  CurveSample out;
  if (a.cwiseAbs().maxCoeff() == 0.0 && b.cwiseAbs().maxCoeff() == 0.0) {
    // det(I) = 1 never vanishes.
    out.dropped_at_infinity.assign(w_grid.size(), static_cast<int>(a.rows()));
    return out;
  }
  const OperatorTuple tuple({a, b});
  const MultiPoly p = charpoly(tuple);
  int z_degree = 0;
  for (const auto& [e, c] : p.terms()) z_degree = std::max(z_degree, e[0]);
  const ComplexVector dir = (ComplexVector(2) << 1.0, 0.0).finished();
  for (const Complex w : w_grid) {
    const ComplexVector base = (ComplexVector(2) << 0.0, w).finished();
    const auto q = trim_leading(restrict_to_line(p, base, dir)).first;
    out.dropped_at_infinity.push_back(z_degree - q.degree());
    if (q.degree() < 1) continue;
    for (const auto& r : roots(q).roots) {
      const ComplexMatrix pencil = r.value * a + w * b + ComplexMatrix::Identity(a.rows(), a.cols());
      out.rows.push_back({w, r.value, std::abs(determinant(pencil)), r.multiplicity > 1});
    }
  }
  return out;
}

PointClass classify_point(const MultiPoly& p, const ComplexVector& z0, double tol) {
  if (z0.size() != p.arity()) throw SpectralError(ErrorCode::ArityMismatch, "point arity differs");
  if (std::abs(evaluate(p, z0)) > tol) return PointClass::off_variety;
  for (int j = 0; j < p.arity(); ++j) {
    if (std::abs(evaluate(p.derivative(j), z0)) > tol) return PointClass::regular;
  }
  return PointClass::singular;
}

ChangeOfBasis::ChangeOfBasis(ComplexMatrix c) : c_(std::move(c)) {
  if (c_.rows() != c_.cols() || c_.rows() == 0) {
    throw SpectralError(ErrorCode::DimensionMismatch, "change of basis must be square");
  }
  Eigen::FullPivLU<ComplexMatrix> lu(c_);
  if (!lu.isInvertible()) throw SpectralError(ErrorCode::SingularC, "change of basis is singular");
  inverse_ = lu.inverse();
  const auto n = c_.rows();
  if ((c_ * inverse_ - ComplexMatrix::Identity(n, n)).norm() > 1e-10) {
    throw SpectralError(ErrorCode::SingularC, "change of basis is numerically singular");
  }
}

OperatorTuple transform_tuple(const OperatorTuple& tuple, const ChangeOfBasis& c) {
  const Eigen::Index n = tuple.arity();
  if (c.matrix().rows() != n) throw SpectralError(ErrorCode::ArityMismatch, "change of basis size differs from arity");
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    ComplexMatrix b = ComplexMatrix::Zero(tuple.dim(), tuple.dim());
    for (Eigen::Index j = 0; j < n; ++j) b += c.matrix()(i, j) * tuple[j];
    out.push_back(std::move(b));
  }
  return OperatorTuple(std::move(out), tuple.flags().tol);
}

}  // namespace jointspec
