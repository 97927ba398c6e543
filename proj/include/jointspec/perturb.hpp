#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "jointspec/matrix_core.hpp"

namespace jointspec {

/// Circle |u - center| = radius discretized with `nodes` trapezoid points.
/// Eigenvalues must keep a relative distance `margin` from the circle.
struct ContourSpec {
  Complex center;
  double radius = 0.0;
  int nodes = 64;
  double margin = 0.3;
};

/// Nodes for which the trapezoid error (1 + margin)^-M on a circle whose
/// nearest eigenvalue sits at relative distance `margin` drops below `target`.
/// The default 64 suits the default contour (relative distance >= 1).
int quadrature_nodes(double margin, double target = 1e-14);

/// Circle around lambda with radius half the gap to the nearest other eigenvalue.
ContourSpec default_contour(const ComplexMatrix& a, Complex lambda, int nodes = 64);

struct RieszProjection {
  ComplexMatrix projection;
  int rank = 0;
  Complex trace;
  double idempotency = 0.0;      // ||P^2 - P||
  double self_adjointness = 0.0; // ||P - P*||
};

/// (1/2 pi i) \oint (uI - A)^{-1} du by the trapezoid rule.
RieszProjection riesz_projection(const ComplexMatrix& a, const ContourSpec& spec);

/// (1/2 pi i) \oint (uI - A)^{-1} B (uI - A)^{-1} du: the first-order change of
/// the Riesz projection under A -> A + eps B.
ComplexMatrix projection_first_order(const ComplexMatrix& a, const ComplexMatrix& b, const ContourSpec& spec);

struct PerturbationConfig {
  double tol = 1e-6;
  std::vector<double> epsilons{1e-3, 1e-4, 1e-5};
  /// Picks the branch for a multiple eigenvalue: the eigenvalue of the
  /// compressed B nearest the hint; largest modulus when unset.
  std::optional<Complex> branch_hint;
};

struct PerturbationProbe {
  Complex lambda;
  int multiplicity = 1;
  ComplexVector v;
  Complex inner;  // <Bv, v>
  std::vector<double> epsilons;
  std::vector<Complex> central_differences;  // (lambda(eps) - lambda(-eps)) / 2 eps
  std::vector<Complex> richardson;           // from consecutive central differences
  Complex fd_derivative;
  double p0_rank = 0.0;  // trace of the unperturbed Riesz projection
  double discrepancy = 0.0;
  bool agree = false;
};

/// d lambda_eps / d eps at 0 for A + eps B, measured by tracking eigenvalues
/// and compared with <Bv, v>.
PerturbationProbe eigenvalue_derivative(const ComplexMatrix& a, const ComplexMatrix& b, Complex lambda,
                                        const PerturbationConfig& cfg = {});

struct TangentReport {
  Complex mu;                  // -lambda phi'(0)
  Complex phi_prime;           // finite-difference slope of the curve z = phi(w)
  Complex implicit_phi_prime;  // -(dp/dw)/(dp/dz) at (-1/lambda, 0)
  std::vector<double> steps;
  std::vector<Complex> central_differences;
  Complex inner;               // <Bv, v>
  double discrepancy = 0.0;
  bool agree = false;
};

/// Tangent line lambda z + mu w + 1 = 0 of det(zA + wB + I) = 0 at (-1/lambda, 0).
TangentReport tangent_mu(const ComplexMatrix& a, const ComplexMatrix& b, Complex lambda,
                         const PerturbationConfig& cfg = {});

struct ExpansionCheck {
  double epsilon = 0.0;
  double residual = 0.0;      // ||P_eps - P_0 - eps T||
  bool eigen_checked = false; // rank-one case only
  double eigen_residual = 0.0;  // ||A_eps P_eps x - lambda_eps P_eps x|| / ||x||
};

ExpansionCheck projection_expansion_check(const ComplexMatrix& a, const ComplexMatrix& b, const ContourSpec& spec,
                                          double epsilon, std::uint64_t seed = 42);

struct ExpansionScaling {
  std::vector<ExpansionCheck> checks;
  std::vector<double> ratios;  // residual(eps_k) / residual(eps_{k+1})
};

/// Residuals at eps, eps/2, eps/4, ... down to `smallest`.
ExpansionScaling projection_expansion_scaling(const ComplexMatrix& a, const ComplexMatrix& b, const ContourSpec& spec,
                                              double largest, double smallest, std::uint64_t seed = 42);

}  // namespace jointspec
