#pragma once

#include <cstdint>
#include <vector>

#include "jointspec/poly.hpp"

namespace jointspec {

/// A point z with the smallest singular value of its pencil I + sum z_k A_k.
struct SpectrumPoint {
  ComplexVector z;
  double witness = 0.0;
  double threshold = 0.0;  // tol * (1 + sum |z_k| ||A_k||)
  bool member = false;
};

SpectrumPoint membership(const OperatorTuple& tuple, const ComplexVector& z, double tol = 1e-7);

struct HyperplaneCheck {
  bool contained = false;
  double max_witness = 0.0;        // largest pencil sigma_min over the samples
  double max_relative_witness = 0.0;  // largest witness / threshold
  double max_poly_residual = 0.0;  // largest |p(z)| / sum |c_e z^e|
  int samples = 0;
};

/// Samples the hyperplane <a, z> + 1 = 0 around its point nearest the origin
/// and tests every sample for membership; the characteristic polynomial is
/// checked at the same points as an exact divisibility cross-check.
HyperplaneCheck hyperplane_membership(const OperatorTuple& tuple, const MultiPoly& charpoly, const ComplexVector& a,
                                      int samples = 32, double tol = 1e-7, std::uint64_t seed = 42);
HyperplaneCheck hyperplane_membership(const OperatorTuple& tuple, const ComplexVector& a, int samples = 32,
                                      double tol = 1e-7, std::uint64_t seed = 42);

struct CurveRow {
  Complex w;
  Complex z;
  double residual = 0.0;  // |det(zA + wB + I)|
  bool multiple = false;  // near-multiple root, candidate singular point
};

struct CurveSample {
  std::vector<CurveRow> rows;
  std::vector<int> dropped_at_infinity;  // per grid w, degrees lost to a vanishing leading term
};

/// All roots z of det(zA + wB + I) for each w of the grid.
CurveSample sample_curve(const ComplexMatrix& a, const ComplexMatrix& b, const std::vector<Complex>& w_grid);

enum class PointClass { regular, singular, off_variety };

constexpr std::string_view to_string(PointClass c) {
  switch (c) {
    case PointClass::regular: return "regular";
    case PointClass::singular: return "singular";
    case PointClass::off_variety: return "off_variety";
  }
  return "unknown";
}

PointClass classify_point(const MultiPoly& p, const ComplexVector& z0, double tol = 1e-7);

/// Invertible n x n change of variables; the inverse is cached.
class ChangeOfBasis {
 public:
  explicit ChangeOfBasis(ComplexMatrix c);

  const ComplexMatrix& matrix() const { return c_; }
  const ComplexMatrix& inverse() const { return inverse_; }
  /// w = z C with z a row vector.
  ComplexVector map_point(const ComplexVector& z) const { return (z.transpose() * c_).transpose(); }

 private:
  ComplexMatrix c_;
  ComplexMatrix inverse_;
};

/// B_i = sum_j c_ij A_j, so that z is in the spectrum of B iff zC is in the spectrum of A.
OperatorTuple transform_tuple(const OperatorTuple& tuple, const ChangeOfBasis& c);

}  // namespace jointspec
