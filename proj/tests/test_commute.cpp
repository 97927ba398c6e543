#include <doctest.h>

#include "oracles.hpp"

using namespace jointspec;
using oracle::diag;
using oracle::mat2;

TEST_CASE("equivalence_report on the counterexample") {
  const auto r = equivalence_report(oracle::counterexample());
  CHECK_FALSE(r.commute);
  CHECK(r.direct > 1.0);
  CHECK(r.reducible);
  CHECK(r.hyperplanes_ok);
  CHECK(r.hyperplanes.size() == 2);
  CHECK_FALSE(r.all_normal);
  CHECK(r.non_normal_gap);
  CHECK(r.consistent);
}

TEST_CASE("equivalence_report on commuting and non-commuting normal tuples") {
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index dim = 2 + trial % 3, n = 2 + trial % 2;
    const auto c = commuting_normal(dim, n, rng);
    const auto yes = equivalence_report(OperatorTuple(c.matrices));
    CHECK(yes.all_normal);
    CHECK(yes.commute);
    CHECK(yes.reducible);
    CHECK(yes.hyperplanes_ok);
    CHECK(yes.consistent);
    CHECK_FALSE(yes.non_normal_gap);

    const auto no = equivalence_report(OperatorTuple(independent_normal(dim, n, rng)));
    CHECK(no.all_normal);
    CHECK_FALSE(no.commute);
    CHECK_FALSE(no.reducible);
    CHECK(no.consistent);
  }
}

TEST_CASE("simultaneous_diagonalize") {
  Rng rng(42);
  SUBCASE("recovers the joint eigenvalues") {
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::Index dim = 2 + trial % 5, n = 1 + trial % 3;
      const auto c = commuting_normal(dim, n, rng);
      const auto d = simultaneous_diagonalize(OperatorTuple(c.matrices));
      CHECK(d.residual < 1e-8);
      CHECK((d.unitary.adjoint() * d.unitary - ComplexMatrix::Identity(dim, dim)).norm() < 1e-10);
      ComplexMatrix got(n, dim), want(n, dim);
      for (Eigen::Index j = 0; j < n; ++j) {
        got.row(j) = d.diagonals[static_cast<std::size_t>(j)].transpose();
        want.row(j) = c.diagonals[static_cast<std::size_t>(j)].transpose();
      }
      if (dim <= 5) CHECK(oracle::matched_error(got, want) < 1e-8);
    }
  }
  SUBCASE("repeated eigenvalues of the first member are split by the others") {
    const ComplexMatrix u = random_unitary(3, rng);
    const ComplexMatrix a = u * diag({1.0, 1.0, 2.0}) * u.adjoint();
    const ComplexMatrix b = u * diag({3.0, -3.0, 0.5}) * u.adjoint();
    const auto d = simultaneous_diagonalize(OperatorTuple({a, b}));
    CHECK(d.residual < 1e-8);
  }
  SUBCASE("rejections") {
    try {
      simultaneous_diagonalize(OperatorTuple({diag({1.0, 2.0}), mat2(0, 1, 1, 0)}));
      FAIL("expected NotCommuting");
    } catch (const SpectralError& e) {
      CHECK(e.code() == ErrorCode::NotCommuting);
    }
    try {
      simultaneous_diagonalize(OperatorTuple({mat2(1, 1, 0, 1), ComplexMatrix::Identity(2, 2)}));
      FAIL("expected NotNormal");
    } catch (const SpectralError& e) {
      CHECK(e.code() == ErrorCode::NotNormal);
    }
  }
}

TEST_CASE("normality_test") {
  Rng rng(43);
  for (int trial = 0; trial < 15; ++trial) {
    const Eigen::Index dim = 2 + trial % 3;
    const auto normal = normality_test(random_normal(dim, rng));
    CHECK(normal.direct_normal);
    CHECK(normal.spectral_normal);
    CHECK(normal.agree);
    const auto generic = normality_test(random_matrix(dim, rng));
    CHECK_FALSE(generic.direct_normal);
    CHECK_FALSE(generic.spectral_normal);
    CHECK(generic.agree);
  }
  const auto jordan = normality_test(mat2(1, 1, 0, 1));
  CHECK_FALSE(jordan.spectral_normal);
  CHECK(jordan.agree);
  const auto zero = normality_test(ComplexMatrix::Zero(2, 2));
  CHECK(zero.spectral_normal);
  CHECK_FALSE(zero.pair.has_value());
}

TEST_CASE("complete_commutativity_test") {
  Rng rng(44);
  SUBCASE("commuting normal pairs pass every pair test") {
    for (int trial = 0; trial < 6; ++trial) {
      const auto c = commuting_normal(3, 2, rng);
      const auto r = complete_commutativity_test(c.matrices[0], c.matrices[1]);
      CHECK(r.spectral);
      CHECK(r.direct);
      CHECK(r.agree);
      REQUIRE(r.four_tuple.has_value());
      CHECK(r.four_tuple->reducible);
    }
  }
  SUBCASE("commuting but not adjoint-commuting pair is caught") {
    // A = B = Jordan block: AB = BA but AB* != B*A.
    const ComplexMatrix j = mat2(0, 1, 0, 0);
    const auto r = complete_commutativity_test(j, j);
    CHECK(r.commutator < 1e-15);
    CHECK(r.adjoint_commutator > 0.1);
    CHECK_FALSE(r.direct);
    CHECK_FALSE(r.spectral);
    CHECK(r.agree);
  }
  SUBCASE("generic pairs fail") {
    const auto r = complete_commutativity_test(random_matrix(3, rng), random_matrix(3, rng));
    CHECK_FALSE(r.spectral);
    CHECK(r.agree);
  }
  CHECK_THROWS_AS(complete_commutativity_test(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3)),
                  SpectralError);
}

TEST_CASE("shared_eigenvector") {
  const ComplexMatrix a = diag({1.0, 2.0}), b = mat2(3, 0, 4, 5);
  const auto x1 = shared_eigenvector(a, b, 1.0, 3.0);
  CHECK(x1.eigen_residual < 1e-12);
  CHECK(x1.inner_residual < 1e-12);
  CHECK(std::abs(x1.x(1)) < 1e-12);
  const auto x2 = shared_eigenvector(a, b, 2.0, 5.0);
  CHECK(std::abs(x2.x(0)) < 1e-12);
  try {
    shared_eigenvector(a, b, 1.0, 4.0);
    FAIL("expected NoSharedVector");
  } catch (const SpectralError& e) {
    CHECK(e.code() == ErrorCode::NoSharedVector);
  }
  CHECK_THROWS_AS(shared_eigenvector(a, b, 3.0, 3.0), SpectralError);

  SUBCASE("lines of commuting tuples give joint eigenvectors") {
    Rng rng(45);
    const auto c = commuting_normal(3, 2, rng);
    for (Eigen::Index k = 0; k < 3; ++k) {
      const auto x = shared_eigenvector(c.matrices[0], c.matrices[1], c.diagonals[0](k), c.diagonals[1](k));
      CHECK((c.matrices[1] * x.x - c.diagonals[1](k) * x.x).norm() < 1e-8);
    }
  }
}
