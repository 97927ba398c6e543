#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jointspec/factor.hpp"
#include "jointspec/spectra.hpp"

namespace jointspec {

struct AnalysisConfig {
  double tol = 1e-7;
  std::uint64_t seed = 42;
  int hyperplane_samples = 16;
  bool four_tuple = true;  // also run the (A+A*, i(A-A*), B+B*, i(B-B*)) test

  FactorConfig factor_config() const {
    FactorConfig f;
    f.tol = tol;
    f.seed = seed;
    return f;
  }
};

/// Commutativity, complete reducibility of the characteristic polynomial and
/// hyperplane containment, computed independently and compared.
struct EquivalenceReport {
  double direct = 0.0;           // max_{i<j} ||[A_i, A_j]||
  double direct_relative = 0.0;  // same, divided by ||A_i|| ||A_j||
  bool commute = false;
  LinearFactorization reducibility;
  bool reducible = false;
  std::vector<HyperplaneCheck> hyperplanes;
  bool hyperplanes_ok = false;
  bool all_normal = false;
  /// Reducible yet non-commuting: possible only without normality.
  bool non_normal_gap = false;
  bool consistent = false;
};

EquivalenceReport equivalence_report(const OperatorTuple& tuple, const AnalysisConfig& cfg = {});

struct JointDiagonalization {
  ComplexMatrix unitary;
  std::vector<ComplexVector> diagonals;  // diagonals[j](k) = lambda_{jk}
  double residual = 0.0;                 // max_j ||U* A_j U - diag(lambda_j)|| / ||A_j||
};

/// Recursive eigenspace refinement: diagonalize A_1, restrict the remaining
/// members to each eigenspace (largest modulus first) and recurse.
JointDiagonalization simultaneous_diagonalize(const OperatorTuple& tuple, double tol = 1e-7);

struct NormalityReport {
  double direct_defect = 0.0;  // ||AA* - A*A|| / ||A||^2
  bool direct_normal = false;
  std::optional<EquivalenceReport> pair;  // for (A + A*, i(A - A*)); empty when A = 0
  bool spectral_normal = false;
  bool agree = false;
};

/// A is normal iff the self-adjoint pair (A + A*, i(A - A*)) has a completely
/// reducible characteristic polynomial; cross-checked against ||AA* - A*A||.
NormalityReport normality_test(const ComplexMatrix& a, const AnalysisConfig& cfg = {});

struct PairReducibility {
  std::string label;
  Verdict verdict = Verdict::reducible;
  double residual = 0.0;
  bool reducible = true;
};

struct CompleteCommutativityReport {
  std::array<PairReducibility, 4> pairs;
  bool spectral = false;  // all four pairs reducible
  double commutator = 0.0;           // ||AB - BA|| / (||A|| ||B||)
  double adjoint_commutator = 0.0;   // ||AB* - B*A|| / (||A|| ||B||)
  bool direct = false;
  bool agree = false;
  std::optional<PairReducibility> four_tuple;  // normal-and-commuting test
};

CompleteCommutativityReport complete_commutativity_test(const ComplexMatrix& a, const ComplexMatrix& b,
                                                        const AnalysisConfig& cfg = {});

struct SharedEigenvector {
  ComplexVector x;
  double eigen_residual = 0.0;  // ||Ax - lambda x||
  double inner_residual = 0.0;  // |<Bx, x> - mu|
  double b_residual = 0.0;      // ||Bx - mu x||
  bool extremal = false;        // |mu| = ||B||, so x is also an eigenvector of B
};

/// Unit x with Ax = lambda x and <Bx, x> = mu for a line lambda z + mu w + 1 = 0
/// of the joint spectrum. Throws NoSharedVector when the residuals exceed tol.
SharedEigenvector shared_eigenvector(const ComplexMatrix& a, const ComplexMatrix& b, Complex lambda, Complex mu,
                                     double tol = 1e-7);

}  // namespace jointspec
