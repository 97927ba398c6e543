#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "jointspec/poly.hpp"

namespace jointspec {

enum class Verdict { reducible, not_reducible, degenerate };

constexpr std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::reducible: return "reducible";
    case Verdict::not_reducible: return "not_reducible";
    case Verdict::degenerate: return "degenerate";
  }
  return "unknown";
}

struct FactorConfig {
  double tol = 1e-7;         // verification tolerance on the relative residual
  std::uint64_t seed = 42;
  int redraws = 8;           // direction draws before giving up
  int steps = 16;            // continuation sub-steps per coordinate
  int max_halvings = 10;     // minimum step is 2^-max_halvings
  int verify_points = 100;
  int verify_attempts = 2;   // fresh directions tried when verification fails
  double cluster = 1e-5;     // relative gap for merging coincident factors
};

/// One factor 1 + <a, z> with its multiplicity.
struct LinearFactor {
  ComplexVector coeffs;
  int multiplicity = 1;
};

struct LinearFactorization {
  std::vector<LinearFactor> factors;
  double residual = 0.0;
  Verdict verdict = Verdict::degenerate;
  std::string note;  // reason for a degenerate verdict, empty otherwise

  int total_multiplicity() const;
  /// Coefficient vectors repeated by multiplicity, one per column.
  ComplexMatrix flattened(int arity) const;
};

/// Decides whether p (with p(0) = 1) is a product of affine-linear factors.
///
/// Roots of p along a random direction u give <a_k, u>; the root set is then
/// continued along u -> u + e_j for each coordinate, which reads off a_kj.
/// Recovered factors are only trusted after p is compared with their product
/// at random points, so non-reducible inputs never come back `reducible`.
LinearFactorization factor_linear(const MultiPoly& p, const FactorConfig& cfg = {});

/// prod_k (1 + <a_k, z>)^{m_k}.
MultiPoly expand_factors(const std::vector<LinearFactor>& factors, int arity);

/// Closed-form 2x2 test: A diagonal, B arbitrary, coefficients of
/// (lambda_1 z + mu_1 w + 1)(lambda_2 z + mu_2 w + 1) matched against det(I + zA + wB).
struct TwoByTwoReport {
  std::array<Complex, 2> lambda_pair{};
  std::array<Complex, 2> mu_pair{};
  /// Mismatch of the mixed zw coefficient for (lambda order) x (sign of the root).
  std::array<double, 4> compatibility_residuals{};
  double abs_bc_residual = 0.0;    // ||b| - |c||
  double cross_residual = 0.0;     // |a conj(c) + b conj(d) - conj(a) b - conj(c) d|
  bool b_normal = false;
  bool reducible = false;
  double tol = 0.0;

  double min_residual() const;
};

TwoByTwoReport reducible_2x2(const ComplexMatrix& a, const ComplexMatrix& b, double tol = 1e-7);

/// Conjugates A to diagonal form with its eigenbasis (A must be normal) and
/// applies reducible_2x2 to (D, U* B U).
TwoByTwoReport reducible_2x2_normal(const ComplexMatrix& a, const ComplexMatrix& b, double tol = 1e-7);

/// The hyperplane {z : <normal, z> + 1 = 0}.
struct Hyperplane {
  ComplexVector normal;
  int multiplicity = 1;
};

std::vector<Hyperplane> factors_to_hyperplanes(const LinearFactorization& f);

}  // namespace jointspec
