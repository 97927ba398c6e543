#include <doctest.h>

#include "oracles.hpp"

using namespace jointspec;
using oracle::diag;
using oracle::mat2;

TEST_CASE("determinant") {
  CHECK(std::abs(determinant(ComplexMatrix::Identity(2, 2)) - 1.0) < 1e-15);
  CHECK(std::abs(determinant((ComplexMatrix::Identity(2, 2) + diag({1.0, 2.0})).eval()) - 6.0) < 1e-14);

  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix m = random_matrix(4, rng);
    const Complex want = oracle::cofactor_det(m);
    CHECK(std::abs(determinant(m) - want) <= 1e-10 * std::abs(want));
  }
}

TEST_CASE("determinant is multiplicative") {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = random_matrix(5, rng);
    const ComplexMatrix b = random_matrix(5, rng);
    const Complex want = determinant(a) * determinant(b);
    CHECK(std::abs(determinant((a * b).eval()) - want) <= 1e-9 * std::abs(want));
  }
}

TEST_CASE("eig_normal on a diagonal matrix") {
  const auto eig = eig_normal(diag({1.0, 2.0}));
  REQUIRE(eig.clusters.size() == 2);
  // Clusters come in decreasing modulus.
  CHECK(std::abs(eig.clusters[0].value - 2.0) < 1e-14);
  CHECK(std::abs(eig.clusters[1].value - 1.0) < 1e-14);
  CHECK(eig.basis.cwiseAbs().isApprox(Eigen::MatrixXd{{0, 1}, {1, 0}}.cast<double>(), 1e-14));
}

TEST_CASE("eig_normal rejects the non-normal counterexample member") {
  try {
    eig_normal(mat2(3, 0, 4, 5));
    FAIL("expected NotNormal");
  } catch (const SpectralError& e) {
    CHECK(e.code() == ErrorCode::NotNormal);
  }
}

TEST_CASE("eig_normal recovers a constructed spectrum with multiplicity") {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix u0 = random_unitary(3, rng);
    const ComplexMatrix m = from_spectrum(u0, (ComplexVector(3) << 2.0, 2.0, -1.0).finished());
    const auto eig = eig_normal(m);
    REQUIRE(eig.clusters.size() == 2);
    CHECK(std::abs(eig.clusters[0].value - 2.0) < 1e-12);
    CHECK(eig.clusters[0].multiplicity == 2);
    CHECK(std::abs(eig.clusters[1].value + 1.0) < 1e-12);
    CHECK(eig.clusters[1].multiplicity == 1);
    // Projection onto the double eigenspace equals the constructed one.
    const ComplexMatrix want = u0.leftCols(2) * u0.leftCols(2).adjoint();
    CHECK((eig.projection(0) - want).norm() < 1e-10);
  }
}

TEST_CASE("eig_normal postconditions on random normal matrices") {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 2 + trial % 5;
    const ComplexMatrix m = random_normal(n, rng);
    const auto eig = eig_normal(m);
    const double norm = operator_norm(m);
    CHECK((eig.basis.adjoint() * eig.basis - ComplexMatrix::Identity(n, n)).norm() < 1e-9);
    CHECK((m * eig.basis - eig.basis * eig.eigenvalues.asDiagonal()).norm() < 1e-8 * norm);
    Eigen::Index total = 0;
    for (const auto& c : eig.clusters) total += c.multiplicity;
    CHECK(total == n);
  }
}

TEST_CASE("smallest singular value") {
  CHECK(std::abs(smallest_singular_value(ComplexMatrix::Identity(3, 3)) - 1.0) < 1e-15);

  Rng rng(5);
  ComplexMatrix m = random_matrix(4, rng);
  m.row(2).setZero();
  CHECK(smallest_singular_value(m) < 1.5e-8);

  // (z, w) = (-1, 0) lies on the factor 1 + z + 3w of the counterexample pencil.
  const auto tuple = oracle::counterexample();
  const ComplexVector z = (ComplexVector(2) << -1.0, 0.0).finished();
  CHECK(smallest_singular_value(tuple.pencil(z)) < 1e-8);
}

TEST_CASE("smallest singular value vanishes exactly on singular constructions") {
  Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 2 + trial % 4;
    ComplexMatrix m = random_matrix(n, rng);
    const bool singular = trial % 2 == 0;
    if (singular) m.col(0) = m.rightCols(n - 1) * random_vector(n - 1, rng);
    const double sigma = smallest_singular_value(m);
    const double det = std::abs(determinant(m));
    const double scale = operator_norm(m);
    CHECK((sigma <= 1e-12 * scale) == singular);
    CHECK((det <= 1e-12 * std::pow(scale, static_cast<double>(n))) == singular);
  }
}

TEST_CASE("commutator norm") {
  Rng rng(7);
  const ComplexMatrix a = random_matrix(4, rng);
  CHECK(commutator_norm(a, (a * a).eval()) < 1e-12 * operator_norm(a) * operator_norm(a) * operator_norm(a));
  // [[0,0],[4,0]] by hand.
  CHECK(std::abs(commutator_norm(diag({1.0, 2.0}), mat2(3, 0, 4, 5)) - 4.0) < 1e-12);
  CHECK(commutator_norm(diag({1.0, 2.0, 3.0}), diag({4.0, 5.0, 6.0})) == 0.0);

  const ComplexMatrix b = random_matrix(4, rng);
  CHECK(std::abs(commutator_norm(a, b) - commutator_norm(b, a)) < 1e-12);
  CHECK_THROWS_AS(commutator_norm(a, ComplexMatrix::Identity(3, 3)), SpectralError);
}

TEST_CASE("operator tuple validation") {
  CHECK_THROWS_AS(OperatorTuple({ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2)}), SpectralError);
  CHECK_THROWS_AS(OperatorTuple({ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3)}), SpectralError);
  CHECK_THROWS_AS(OperatorTuple(std::vector<ComplexMatrix>{}), SpectralError);

  const auto t = oracle::counterexample();
  CHECK(t.arity() == 2);
  CHECK(t.dim() == 2);
  CHECK_FALSE(t.flags().all_normal);
  CHECK(OperatorTuple({diag({1.0, 2.0})}).flags().all_selfadjoint);
}
