#include <doctest.h>

#include "oracles.hpp"

using namespace jointspec;
using oracle::diag;
using oracle::mat2;

namespace {

ComplexVector pt(Complex a, Complex b) { return (ComplexVector(2) << a, b).finished(); }

}  // namespace

TEST_CASE("membership on the counterexample") {
  const auto t = oracle::counterexample();
  CHECK(membership(t, pt(-1, 0)).member);
  CHECK(membership(t, pt(-0.5, 0)).member);
  CHECK(membership(t, pt(0, -0.2)).member);
  CHECK_FALSE(membership(t, pt(0, 0)).member);
  CHECK_FALSE(membership(t, pt(1, 1)).member);
  // 1 + z + 3w = 0 along z = -1 - 3w.
  for (double w : {-2.0, -0.3, 0.7, 4.0}) CHECK(membership(t, pt(-1.0 - 3.0 * w, w)).member);
  CHECK_THROWS_AS(membership(t, ComplexVector::Zero(3).eval()), SpectralError);
}

TEST_CASE("hyperplane_membership on the counterexample") {
  const auto t = oracle::counterexample();
  const MultiPoly p = charpoly(t);
  SUBCASE("true factors") {
    for (const auto& a : {pt(1, 3), pt(2, 5)}) {
      const auto h = hyperplane_membership(t, p, a);
      CHECK(h.contained);
      CHECK(h.samples == 32);
      CHECK(h.max_poly_residual < 1e-12);
    }
  }
  SUBCASE("wrong plane") {
    const auto h = hyperplane_membership(t, p, pt(1, 4));
    CHECK_FALSE(h.contained);
    CHECK(h.max_relative_witness > 1.0);
  }
  SUBCASE("zero normal") {
    try {
      hyperplane_membership(t, p, pt(0, 0));
      FAIL("expected ZeroNormal");
    } catch (const SpectralError& e) {
      CHECK(e.code() == ErrorCode::ZeroNormal);
    }
  }
}

TEST_CASE("hyperplanes of commuting tuples are their joint eigenvalues") {
  Rng rng(31);
  for (int trial = 0; trial < 8; ++trial) {
    const auto c = commuting_normal(3, 3, rng);
    const OperatorTuple t(c.matrices);
    const ComplexMatrix joint = oracle::joint_eigenvalues(c.diagonals);
    for (Eigen::Index k = 0; k < joint.cols(); ++k) {
      CHECK(hyperplane_membership(t, joint.col(k), 16).contained);
    }
    CHECK_FALSE(hyperplane_membership(t, random_vector(3, rng), 16).contained);
  }
}

TEST_CASE("sample_curve") {
  SUBCASE("counterexample curve is two lines") {
    const std::vector<Complex> grid{-1.0, 0.0, 0.5, Complex(0.3, 0.2)};
    const auto s = sample_curve(diag({1.0, 2.0}), mat2(3, 0, 4, 5), grid);
    // At w = -1 both lines pass through z = 2, a double root.
    CHECK(s.rows.size() == 7);
    CHECK(std::count_if(s.rows.begin(), s.rows.end(), [](const CurveRow& r) { return r.multiple; }) == 1);
    for (const auto& r : s.rows) {
      const Complex l1 = 1.0 + r.z + 3.0 * r.w, l2 = 1.0 + 2.0 * r.z + 5.0 * r.w;
      CHECK(std::min(std::abs(l1), std::abs(l2)) < 1e-10);
      CHECK(r.residual < 1e-10);
    }
    for (int d : s.dropped_at_infinity) CHECK(d == 0);
  }
  SUBCASE("vanishing leading term is reported") {
    // det(I + zA + wB) = 1 - zw loses its z term at w = 0.
    const auto s = sample_curve(mat2(0, 1, 0, 0), mat2(0, 0, 1, 0), {0.0, 2.0});
    REQUIRE(s.dropped_at_infinity.size() == 2);
    CHECK(s.dropped_at_infinity[0] == 1);
    CHECK(s.dropped_at_infinity[1] == 0);
    REQUIRE(s.rows.size() == 1);
    CHECK(std::abs(s.rows[0].z - 0.5) < 1e-12);
  }
  SUBCASE("the zero pair has an empty curve") {
    const auto s = sample_curve(ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2), {0.0, 1.0});
    CHECK(s.rows.empty());
  }
}

TEST_CASE("classify_point") {
  const MultiPoly p = charpoly(oracle::counterexample());
  CHECK(classify_point(p, pt(-1, 0)) == PointClass::regular);
  CHECK(classify_point(p, pt(0, 0)) == PointClass::off_variety);
  // The two lines 1 + z + 3w = 0 and 1 + 2z + 5w = 0 cross at (2, -1).
  CHECK(std::abs(evaluate(p, pt(2, -1))) < 1e-12);
  CHECK(classify_point(p, pt(2, -1)) == PointClass::singular);
}

TEST_CASE("ChangeOfBasis") {
  Rng rng(32);
  const ChangeOfBasis c(random_matrix(3, rng));
  CHECK((c.matrix() * c.inverse() - ComplexMatrix::Identity(3, 3)).norm() < 1e-10);
  try {
    ChangeOfBasis(ComplexMatrix::Ones(2, 2));
    FAIL("expected SingularC");
  } catch (const SpectralError& e) {
    CHECK(e.code() == ErrorCode::SingularC);
  }
}

TEST_CASE("transformed tuples have spectra related by z -> zC") {
  Rng rng(33);
  for (int trial = 0; trial < 6; ++trial) {
    const OperatorTuple a({random_matrix(3, rng), random_matrix(3, rng)});
    const ChangeOfBasis c(random_matrix(2, rng));
    const OperatorTuple b = transform_tuple(a, c);
    const MultiPoly pa = charpoly(a), pb = charpoly(b);
    for (int k = 0; k < 20; ++k) {
      const ComplexVector z = random_vector(2, rng);
      CHECK(std::abs(evaluate(pb, z) - evaluate(pa, c.map_point(z))) < 1e-8 * (1.0 + evaluate_majorant(pb, z)));
    }
    // Points of the B spectrum map to points of the A spectrum.
    const auto s = sample_curve(b[0], b[1], {Complex(0.2, 0.1)});
    for (const auto& r : s.rows) {
      CHECK(membership(a, c.map_point(pt(r.z, r.w)), 1e-6).member);
    }
  }
}
