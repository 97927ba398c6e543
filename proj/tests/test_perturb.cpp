#include <doctest.h>

#include "oracles.hpp"

using namespace jointspec;
using oracle::diag;
using oracle::mat2;

TEST_CASE("riesz_projection") {
  SUBCASE("diagonal matrix") {
    const auto r = riesz_projection(diag({1.0, 2.0, 5.0}), {1.5, 1.0});
    CHECK((r.projection - diag({1.0, 1.0, 0.0})).norm() < 1e-10);
    CHECK(r.rank == 2);
    CHECK(r.idempotency < 1e-10);
  }
  SUBCASE("non-normal matrix gives an oblique projection") {
    const auto r = riesz_projection(mat2(1, 1, 0, 2), default_contour(mat2(1, 1, 0, 2), 1.0));
    CHECK((r.projection - mat2(1, -1, 0, 0)).norm() < 1e-10);
    CHECK(std::abs(r.self_adjointness - 1.0) < 1e-10);
  }
  SUBCASE("normal matrices give orthogonal projections onto eigenspaces") {
    Rng rng(51);
    for (int trial = 0; trial < 10; ++trial) {
      const ComplexMatrix a = random_normal(4, rng);
      const auto eig = eig_normal(a);
      const auto r = riesz_projection(a, default_contour(a, eig.clusters[0].value));
      CHECK((r.projection - eig.projection(0)).norm() < 1e-8);
      CHECK(r.self_adjointness < 1e-8);
      CHECK(r.rank == 1);
    }
  }
  SUBCASE("bad contours") {
    try {
      riesz_projection(diag({1.0, 2.0}), {1.0, 1.0});
      FAIL("expected ContourThroughSpectrum");
    } catch (const SpectralError& e) {
      CHECK(e.code() == ErrorCode::ContourThroughSpectrum);
    }
    try {
      // Eigenvalue 2 sits at relative distance 0.1 from the circle.
      riesz_projection(diag({1.0, 2.0}), {1.0, 1.1});
      FAIL("expected ContourThroughSpectrum");
    } catch (const SpectralError& e) {
      CHECK(e.code() == ErrorCode::ContourThroughSpectrum);
    }
    CHECK_THROWS_AS(riesz_projection(diag({1.0, 2.0}), {1.0, 0.0}), SpectralError);
  }
}

TEST_CASE("quadrature_nodes") {
  CHECK(quadrature_nodes(0.3) == 123);
  CHECK(quadrature_nodes(1.0 - 1e-9, 1e-14) == 47);
  CHECK(quadrature_nodes(0.9, 0.5) == 16);
  CHECK_THROWS_AS(quadrature_nodes(0.0), SpectralError);

  // Eigenvalue 1.31 sits just past the margin outside the unit circle.
  const ComplexMatrix a = diag({0.0, 1.31});
  ContourSpec spec{0.0, 1.0};
  CHECK(riesz_projection(a, spec).idempotency > 1e-8);
  spec.nodes = quadrature_nodes(spec.margin);
  CHECK(riesz_projection(a, spec).idempotency < 1e-12);
}

TEST_CASE("projection_first_order") {
  // For A = diag(1, 2) and B = [[0,1],[1,0]] the projection onto the first
  // eigenvector moves by eps [[0,-1],[-1,0]].
  const ComplexMatrix t = projection_first_order(diag({1.0, 2.0}), mat2(0, 1, 1, 0), {1.0, 0.5});
  CHECK((t - mat2(0, -1, -1, 0)).norm() < 1e-10);
}

TEST_CASE("projection expansion is second order") {
  const ComplexMatrix a = diag({1.0, 2.0}), b = mat2(0, 1, 1, 0);
  const auto s = projection_expansion_scaling(a, b, {1.0, 0.5}, 1e-2, 1e-4);
  REQUIRE(s.ratios.size() >= 6);
  for (double r : s.ratios) CHECK((r > 3.0 && r < 5.0));
  for (const auto& c : s.checks) {
    CHECK(c.eigen_checked);
    CHECK(c.eigen_residual < 1e-8);
  }
}

TEST_CASE("eigenvalue_derivative") {
  SUBCASE("closed form") {
    // Smaller eigenvalue of [[1, e],[e, 2]] is (3 - sqrt(1 + 4 e^2))/2, flat at 0;
    // along B = diag(3, -1) it moves with slope 3.
    const auto flat = eigenvalue_derivative(diag({1.0, 2.0}), mat2(0, 1, 1, 0), 1.0);
    CHECK(std::abs(flat.fd_derivative) < 1e-6);
    CHECK(flat.agree);
    const auto slope = eigenvalue_derivative(diag({1.0, 2.0}), diag({3.0, -1.0}), 1.0);
    CHECK(std::abs(slope.fd_derivative - 3.0) < 1e-8);
    CHECK(std::abs(slope.p0_rank - 1.0) < 1e-8);
  }
  SUBCASE("non-normal perturbation of a normal matrix") {
    Rng rng(52);
    for (int trial = 0; trial < 10; ++trial) {
      const ComplexMatrix a = random_normal(3, rng), b = random_matrix(3, rng);
      const auto eig = eig_normal(a);
      const auto probe = eigenvalue_derivative(a, b, eig.clusters[1].value);
      CHECK(probe.agree);
      CHECK(probe.multiplicity == 1);
    }
  }
  SUBCASE("multiple eigenvalue in the self-adjoint regime") {
    const ComplexMatrix a = diag({1.0, 1.0, 3.0});
    const ComplexMatrix bb = diag({2.0, -1.0, 0.0});
    const auto top = eigenvalue_derivative(a, bb, 1.0);
    CHECK(top.multiplicity == 2);
    CHECK(std::abs(top.inner - 2.0) < 1e-10);
    CHECK(top.agree);
    PerturbationConfig cfg;
    cfg.branch_hint = Complex(-1.0);
    const auto low = eigenvalue_derivative(a, bb, 1.0, cfg);
    CHECK(std::abs(low.inner + 1.0) < 1e-10);
    CHECK(low.agree);
  }
  SUBCASE("multiple eigenvalue outside the self-adjoint regime") {
    try {
      eigenvalue_derivative(diag({1.0, 1.0}), mat2(0, 1, 0, 0), 1.0);
      FAIL("expected MultiplicityRegimeViolation");
    } catch (const SpectralError& e) {
      CHECK(e.code() == ErrorCode::MultiplicityRegimeViolation);
    }
  }
  CHECK_THROWS_AS(eigenvalue_derivative(diag({1.0, 2.0}), diag({1.0, 1.0}), 7.0), SpectralError);
}

TEST_CASE("tangent_mu") {
  SUBCASE("counterexample line 1 + z + 3w = 0") {
    const auto t = tangent_mu(diag({1.0, 2.0}), mat2(3, 0, 4, 5), 1.0);
    CHECK(std::abs(t.mu - 3.0) < 1e-6);
    CHECK(std::abs(t.implicit_phi_prime + 3.0) < 1e-10);
    CHECK(t.agree);
  }
  SUBCASE("normal A with arbitrary B") {
    Rng rng(53);
    for (int trial = 0; trial < 10; ++trial) {
      const ComplexMatrix a = random_normal(3, rng), b = random_matrix(3, rng);
      const auto t = tangent_mu(a, b, eig_normal(a).clusters[0].value);
      CHECK(t.agree);
      CHECK(std::abs(t.mu - t.inner) < 1e-6);
    }
  }
  SUBCASE("rejections") {
    CHECK_THROWS_AS(tangent_mu(diag({1.0, 2.0}), diag({1.0, 1.0}), 0.0), SpectralError);
    try {
      tangent_mu(diag({1.0, 1.0}), mat2(0, 1, 1, 0), 1.0);
      FAIL("expected MultiplicityRegimeViolation");
    } catch (const SpectralError& e) {
      CHECK(e.code() == ErrorCode::MultiplicityRegimeViolation);
    }
  }
}
